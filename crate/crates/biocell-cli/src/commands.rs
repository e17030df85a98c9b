use std::str::FromStr;

use anyhow::{bail, Context, Result};
use biocell::compare::{
    builtin_records, emit_scatter, ingest_records, scatter_svg, write_records_csv,
    write_scatter_csv,
};
use biocell::engine::{EngineOptions, EngineRegistry, EngineSpec};
use biocell::kinetics::{ModelParams, Trajectory};
use biocell::meanfield::{steady_state, time_to_fraction, Regime, SteadyState};
use biocell::montecarlo::run_ensemble;
use biocell::sweep::{self, Axis, GridSpec, SweepParam};
use biocell::svg;

use crate::config::{load_config, FileValues};
use crate::output::{thin_for_svg, write_ensemble_csv, write_trajectory_csv, StagedOutputs};
use crate::{CompareArgs, EnsembleArgs, EngineFlags, ParamFlags, SimulateArgs, SteadyArgs, SweepArgs};

const DEFAULT_RUNS: usize = 100;
const DEFAULT_ENSEMBLE_STRIDE: usize = 100;
const SVG_MAX_POINTS: usize = 2000;

fn file_values(params: &ParamFlags) -> Result<FileValues> {
    match &params.config {
        Some(path) => load_config(path),
        None => Ok(FileValues::default()),
    }
}

/// Flags override config-file values override built-in defaults.
fn resolve_params(flags: &ParamFlags, file: &FileValues) -> Result<ModelParams> {
    let defaults = ModelParams::default();
    let params = ModelParams {
        n: flags.n.or(file.n).unwrap_or(defaults.n),
        g_i: flags.g_i.or(file.g_i).unwrap_or(defaults.g_i),
        p: flags.p.or(file.p).unwrap_or(defaults.p),
        t_i: flags.t_i.or(file.t_i).unwrap_or(defaults.t_i),
        v_max: flags.v_max.or(file.v_max).unwrap_or(defaults.v_max),
        k_m: flags.k_m.or(file.k_m).unwrap_or(defaults.k_m),
        p_max: flags.p_max.or(file.p_max).unwrap_or(defaults.p_max),
        s0: flags.s0.or(file.s0).unwrap_or(defaults.s0),
        t_end: flags.t_end.or(file.t_end).unwrap_or(defaults.t_end),
        dt: flags.dt.or(file.dt).unwrap_or(defaults.dt),
    };
    Ok(params.validated()?)
}

fn resolve_engine(flags: &EngineFlags, file: &FileValues) -> Result<EngineSpec> {
    let name = flags
        .engine
        .clone()
        .or_else(|| file.engine.clone())
        .unwrap_or_else(|| "mean-field".to_string());
    let opts = EngineOptions {
        num_runs: flags.runs.or(file.runs).unwrap_or(DEFAULT_RUNS),
        master_seed: flags.seed.or(file.seed),
    };
    Ok(EngineRegistry::with_builtins().create(&name, &opts)?)
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => bail!("--threads must be at least 1"),
        Some(t) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .context("building thread pool")?
            .install(f)),
    }
}

fn print_steady_line(ss: &SteadyState, params: &ModelParams) {
    match ss.regime {
        Regime::Bounded => println!(
            "steady state: bounded regime, r = {:.6} µM/s, S* = {:.6} µM, P* = {:.6} mW/cm²",
            ss.r,
            ss.s_star.unwrap_or(0.0),
            ss.p_star
        ),
        Regime::Saturating => println!(
            "steady state: saturating regime, r = {:.6} µM/s >= V_max = {} µM/s, \
             P climbs toward P_max = {} mW/cm²",
            ss.r, params.v_max, params.p_max
        ),
    }
}

/// Mean power over the last whole signaling interval, where the trajectory
/// has settled closest to the long-run average.
fn last_period_mean_power(traj: &Trajectory, params: &ModelParams) -> Option<f64> {
    let m = params.steps_per_interval() as usize;
    let end = (traj.points.len() - 1) / m * m;
    if end == 0 {
        return None;
    }
    let window = &traj.points[end - m..end];
    Some(window.iter().map(|pt| pt.p).sum::<f64>() / m as f64)
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    let file = file_values(&args.params)?;
    let params = resolve_params(&args.params, &file)?;
    let spec = resolve_engine(&args.engine, &file)?;
    if args.stride == 0 {
        bail!("--stride must be at least 1");
    }

    let traj = with_threads(args.run.threads.or(file.threads), || {
        spec.instantiate().trajectory(&params)
    })?;

    let mut outs = StagedOutputs::new();
    outs.stage(&args.out, |w| Ok(write_trajectory_csv(&traj, args.stride, w)?))?;
    if let Some(svg_path) = &args.svg {
        let points: Vec<(f64, f64)> = traj.points.iter().map(|pt| (pt.t, pt.p)).collect();
        let thinned = thin_for_svg(&points, SVG_MAX_POINTS);
        let chart = svg::line_chart(
            &format!("power density, engine {spec}"),
            "t [s]",
            "P [mW/cm²]",
            &[("P", &thinned)],
        );
        outs.stage(svg_path, |w| Ok(w.write_all(chart.as_bytes())?))?;
    }
    let written = outs.commit()?;
    for path in &written {
        println!("wrote {}", path.display());
    }

    let fp = traj.final_point();
    println!("engine: {spec} ({})", traj.kind);
    println!("final: t = {} s, S = {:.6} µM, P = {:.6} mW/cm²", fp.t, fp.s, fp.p);
    if let Some(avg) = last_period_mean_power(&traj, &params) {
        println!("last-period mean P = {avg:.6} mW/cm²");
    }
    print_steady_line(&steady_state(&params), &params);
    Ok(())
}

pub fn ensemble(args: EnsembleArgs) -> Result<()> {
    let file = file_values(&args.params)?;
    let params = resolve_params(&args.params, &file)?;
    let Some(seed) = args.seed.or(file.seed) else {
        bail!("--seed is required: ensembles never seed themselves from the clock");
    };
    let runs = args.runs.or(file.runs).unwrap_or(DEFAULT_RUNS);
    if runs == 0 {
        bail!("--runs must be at least 1");
    }
    let stride = args.stride.or(file.stride).unwrap_or(DEFAULT_ENSEMBLE_STRIDE);
    if stride == 0 {
        bail!("--stride must be at least 1");
    }

    let stats = with_threads(args.run.threads.or(file.threads), || {
        run_ensemble(&params, runs, seed, stride)
    })?;

    let mut outs = StagedOutputs::new();
    outs.stage(&args.out, |w| Ok(write_ensemble_csv(&stats, w)?))?;
    if let Some(svg_path) = &args.svg {
        let series_of = |values: &[f64]| -> Vec<(f64, f64)> {
            thin_for_svg(
                &stats.times.iter().copied().zip(values.iter().copied()).collect::<Vec<_>>(),
                SVG_MAX_POINTS,
            )
        };
        let mean = series_of(&stats.mean_p);
        let q05 = series_of(&stats.q05_p);
        let q95 = series_of(&stats.q95_p);
        let chart = svg::line_chart(
            &format!("ensemble power density ({} runs, seed {})", runs, seed),
            "t [s]",
            "P [mW/cm²]",
            &[("mean", &mean), ("q05", &q05), ("q95", &q95)],
        );
        outs.stage(svg_path, |w| Ok(w.write_all(chart.as_bytes())?))?;
    }
    let written = outs.commit()?;
    for path in &written {
        println!("wrote {}", path.display());
    }

    let j = stats.times.len() - 1;
    println!("engine: monte-carlo(runs={runs}, seed={seed}), stride {stride}");
    println!(
        "final: t = {} s, mean P = {:.6} ± {:.6} mW/cm² (q05 {:.6}, q50 {:.6}, q95 {:.6}), \
         mean S = {:.6} µM",
        stats.times[j],
        stats.mean_p[j],
        stats.std_p[j],
        stats.q05_p[j],
        stats.q50_p[j],
        stats.q95_p[j],
        stats.mean_s[j]
    );
    // Moment-closure gap at the horizon: ensemble mean versus the mean-field
    // approximation (its sign is parameter-dependent; it is reported, never
    // asserted).
    let p_mf = EngineSpec::MeanField.instantiate().cell_power(&params, 0, 0);
    println!(
        "closure gap at t_end: mean_P - P_meanfield = {:+.6} mW/cm² \
         (ensemble standard error {:.6})",
        stats.mean_p[j] - p_mf,
        stats.std_p[j] / (runs as f64).sqrt()
    );
    print_steady_line(&steady_state(&params), &params);
    Ok(())
}

fn parse_axis(spec: &str) -> Result<Axis> {
    let Some((name, rest)) = spec.split_once('=') else {
        bail!("axis `{spec}`: expected `param=start:stop:step` or `param=v1,v2,...`");
    };
    let param = SweepParam::from_str(name.trim())?;
    let rest = rest.trim();
    let values = if rest.contains(':') {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            bail!("axis `{spec}`: range form needs exactly start:stop:step");
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("axis `{spec}`: `{s}` is not a number"))
        };
        let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if !(step > 0.0) {
            bail!("axis `{spec}`: step must be > 0");
        }
        if stop < start {
            bail!("axis `{spec}`: stop must be >= start");
        }
        sweep::range_values(start, stop, step)
    } else {
        rest.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .with_context(|| format!("axis `{spec}`: `{s}` is not a number"))
            })
            .collect::<Result<Vec<f64>>>()?
    };
    if values.is_empty() {
        bail!("axis `{spec}`: no values");
    }
    Ok(Axis::new(param, values))
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let file = file_values(&args.params)?;
    let engine = resolve_engine(&args.engine, &file)?;

    let mut spec = match (&args.preset, &args.x_axis, &args.y_axis) {
        (Some(name), None, None) => sweep::preset(name)?,
        (None, Some(x), Some(y)) => GridSpec {
            x: parse_axis(x)?,
            y: parse_axis(y)?,
            base: ModelParams::default(),
            eval_time: sweep::PANEL_EVAL_TIME,
            engine,
        },
        (None, _, _) => bail!("either --preset or both --x-axis and --y-axis are required"),
        _ => unreachable!("clap rejects --preset together with explicit axes"),
    };
    spec.engine = engine;
    // Explicit parameter flags override the preset/default base; axis values
    // still replace their parameter per cell.
    let base_flags = ParamFlags { config: None, ..args.params.clone() };
    let base_defaults = spec.base.clone();
    spec.base = ModelParams {
        n: base_flags.n.or(file.n).unwrap_or(base_defaults.n),
        g_i: base_flags.g_i.or(file.g_i).unwrap_or(base_defaults.g_i),
        p: base_flags.p.or(file.p).unwrap_or(base_defaults.p),
        t_i: base_flags.t_i.or(file.t_i).unwrap_or(base_defaults.t_i),
        v_max: base_flags.v_max.or(file.v_max).unwrap_or(base_defaults.v_max),
        k_m: base_flags.k_m.or(file.k_m).unwrap_or(base_defaults.k_m),
        p_max: base_flags.p_max.or(file.p_max).unwrap_or(base_defaults.p_max),
        s0: base_flags.s0.or(file.s0).unwrap_or(base_defaults.s0),
        t_end: base_flags.t_end.or(file.t_end).unwrap_or(base_defaults.t_end),
        dt: base_flags.dt.or(file.dt).unwrap_or(base_defaults.dt),
    }
    .validated()?;
    if let Some(eval_time) = args.eval_time {
        spec.eval_time = eval_time;
    }

    let grid = with_threads(args.run.threads.or(file.threads), || sweep::run_sweep(&spec))??;

    let mut outs = StagedOutputs::new();
    outs.stage(&args.out, |w| Ok(sweep::write_csv(&grid, w)?))?;
    if let Some(svg_path) = &args.svg {
        let chart = sweep::to_svg(&grid);
        outs.stage(svg_path, |w| Ok(w.write_all(chart.as_bytes())?))?;
    }
    let written = outs.commit()?;
    for path in &written {
        println!("wrote {}", path.display());
    }

    let (min, max) = grid
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    println!(
        "sweep: {} × {} = {} cells, engine {}, eval time {} s",
        grid.x.param,
        grid.y.param,
        grid.values.len(),
        grid.engine,
        grid.eval_time
    );
    println!("cell power range: {min:.6} .. {max:.6} mW/cm²");
    Ok(())
}

pub fn steady(args: SteadyArgs) -> Result<()> {
    let file = file_values(&args.params)?;
    let params = resolve_params(&args.params, &file)?;
    let ss = steady_state(&params);

    let mut report = String::new();
    use std::fmt::Write as _;
    let _ = writeln!(
        report,
        "parameters: n = {}, g_i = {} µM, p = {}, T_i = {} s, V_max = {} µM/s, \
         K_m = {} µM, P_max = {} mW/cm²",
        params.n, params.g_i, params.p, params.t_i, params.v_max, params.k_m, params.p_max
    );
    let _ = writeln!(report, "mean influx rate r = n·g_i·p/T_i = {:.9} µM/s", ss.r);
    let _ = writeln!(report, "regime: {}", ss.regime);
    match ss.regime {
        Regime::Bounded => {
            let _ = writeln!(report, "S* = {:.9} µM", ss.s_star.unwrap_or(0.0));
            let _ = writeln!(report, "P* = {:.9} mW/cm²", ss.p_star);
            if ss.p_star > 0.0 {
                match time_to_fraction(&params, 0.95)? {
                    Some(t) => {
                        let _ = writeln!(report, "time to 0.95·P*: {t} s");
                    }
                    None => {
                        let _ = writeln!(
                            report,
                            "time to 0.95·P*: not reached within t_end = {} s",
                            params.t_end
                        );
                    }
                }
            }
        }
        Regime::Saturating => {
            let _ = writeln!(
                report,
                "P climbs toward P_max = {} mW/cm² (no finite S*)",
                params.p_max
            );
        }
    }

    print!("{report}");
    if let Some(out) = &args.out {
        let mut outs = StagedOutputs::new();
        outs.stage(out, |w| Ok(w.write_all(report.as_bytes())?))?;
        for path in outs.commit()? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

pub fn compare(args: CompareArgs) -> Result<()> {
    let mut records = builtin_records();
    for path in &args.input {
        let file = std::fs::File::open(path)
            .with_context(|| format!("opening record file {}", path.display()))?;
        let mut ingested = ingest_records(file)
            .with_context(|| format!("ingesting record file {}", path.display()))?;
        records.append(&mut ingested);
    }
    let dataset = emit_scatter(&records)?;

    let mut outs = StagedOutputs::new();
    outs.stage(&args.out, |w| Ok(write_scatter_csv(&dataset, w)?))?;
    if let Some(svg_path) = &args.svg {
        let chart = scatter_svg(&dataset);
        outs.stage(svg_path, |w| Ok(w.write_all(chart.as_bytes())?))?;
    }
    if let Some(records_path) = &args.records_out {
        outs.stage(records_path, |w| Ok(write_records_csv(&records, w)?))?;
    }
    let written = outs.commit()?;
    for path in &written {
        println!("wrote {}", path.display());
    }

    println!(
        "comparison: {} respiration point(s), {} photosynthetic point(s) \
         ({} record(s) from {} input file(s))",
        dataset.respiration.len(),
        dataset.photosynthetic.len(),
        records.len(),
        args.input.len()
    );
    Ok(())
}
