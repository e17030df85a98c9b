//! Flat key = value config files and their merge with command-line flags.
//!
//! Precedence: command-line flags override config-file values, which override
//! the built-in defaults. Unknown keys are errors, so a typo cannot silently
//! fall back to a default.

use std::path::Path;

use anyhow::{bail, Context, Result};

/// Values a config file may set. Every field mirrors a flag of the same name.
#[derive(Debug, Default, Clone)]
pub struct FileValues {
    pub n: Option<u32>,
    pub g_i: Option<f64>,
    pub p: Option<f64>,
    pub t_i: Option<f64>,
    pub v_max: Option<f64>,
    pub k_m: Option<f64>,
    pub p_max: Option<f64>,
    pub s0: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub engine: Option<String>,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub stride: Option<usize>,
    pub threads: Option<usize>,
}

/// Parses a config file: one `key = value` per line, `#` comments, blank
/// lines allowed. Keys match the long flag names with underscores
/// (`g_i`, `t_end`, …).
pub fn load_config(path: &Path) -> Result<FileValues> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let mut values = FileValues::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(
                "config {} line {line_no}: expected `key = value`, got `{raw_line}`",
                path.display()
            );
        };
        let key = key.trim();
        let value = value.trim();
        let parse_err =
            || format!("config {} line {line_no}: invalid value for `{key}`", path.display());
        match key {
            "n" => values.n = Some(value.parse().with_context(parse_err)?),
            "g_i" => values.g_i = Some(value.parse().with_context(parse_err)?),
            "p" => values.p = Some(value.parse().with_context(parse_err)?),
            "t_i" => values.t_i = Some(value.parse().with_context(parse_err)?),
            "v_max" => values.v_max = Some(value.parse().with_context(parse_err)?),
            "k_m" => values.k_m = Some(value.parse().with_context(parse_err)?),
            "p_max" => values.p_max = Some(value.parse().with_context(parse_err)?),
            "s0" => values.s0 = Some(value.parse().with_context(parse_err)?),
            "t_end" => values.t_end = Some(value.parse().with_context(parse_err)?),
            "dt" => values.dt = Some(value.parse().with_context(parse_err)?),
            "engine" => values.engine = Some(value.to_string()),
            "seed" => values.seed = Some(value.parse().with_context(parse_err)?),
            "runs" => values.runs = Some(value.parse().with_context(parse_err)?),
            "stride" => values.stride = Some(value.parse().with_context(parse_err)?),
            "threads" => values.threads = Some(value.parse().with_context(parse_err)?),
            other => bail!(
                "config {} line {line_no}: unknown key `{other}` (known keys: n, g_i, p, t_i, \
                 v_max, k_m, p_max, s0, t_end, dt, engine, seed, runs, stride, threads)",
                path.display()
            ),
        }
    }
    Ok(values)
}
