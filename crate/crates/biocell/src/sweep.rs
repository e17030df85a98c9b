//! Two-axis parameter sweeps: the three figure presets plus arbitrary
//! user-defined grids, evaluated cell by cell with a selectable engine.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::engine::EngineSpec;
use crate::error::{Error, Result};
use crate::kinetics::ModelParams;
use crate::svg;

/// Parameters a sweep axis may range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    P,
    N,
    GI,
    TI,
    VMax,
    KM,
    S0,
}

impl SweepParam {
    pub const ALL: [SweepParam; 7] = [
        SweepParam::P,
        SweepParam::N,
        SweepParam::GI,
        SweepParam::TI,
        SweepParam::VMax,
        SweepParam::KM,
        SweepParam::S0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::P => "p",
            SweepParam::N => "n",
            SweepParam::GI => "g_i",
            SweepParam::TI => "T_i",
            SweepParam::VMax => "V_max",
            SweepParam::KM => "K_m",
            SweepParam::S0 => "s0",
        }
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::invalid(
                    "axis",
                    format!(
                        "unknown sweep parameter `{s}` (expected one of: {})",
                        SweepParam::ALL.map(SweepParam::name).join(", ")
                    ),
                )
            })
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One sweep axis: a parameter and its ordered values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Self {
        Axis { param, values }
    }
}

/// Everything needed to run one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x: Axis,
    pub y: Axis,
    pub base: ModelParams,
    /// Time at which each cell's power density is read \[s\].
    pub eval_time: f64,
    pub engine: EngineSpec,
}

/// Sweep result: power density at `eval_time` per cell, row-major by (y, x).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub x: Axis,
    pub y: Axis,
    pub base: ModelParams,
    pub eval_time: f64,
    pub engine: EngineSpec,
    pub values: Vec<f64>,
}

impl SweepGrid {
    pub fn width(&self) -> usize {
        self.x.values.len()
    }

    pub fn height(&self) -> usize {
        self.y.values.len()
    }

    /// Cell value at row `yi`, column `xi` \[mW/cm²\].
    pub fn value(&self, yi: usize, xi: usize) -> f64 {
        self.values[yi * self.width() + xi]
    }
}

/// Substitutes one axis value into a parameter set. The plant count accepts
/// only whole non-negative numbers.
fn apply(base: &ModelParams, param: SweepParam, value: f64) -> Result<ModelParams> {
    let mut params = base.clone();
    match param {
        SweepParam::P => params.p = value,
        SweepParam::N => {
            if !value.is_finite() || value < 0.0 || (value - value.round()).abs() > 1e-9 {
                return Err(Error::invalid(
                    "n",
                    format!("must be a whole number of plants >= 0, got {value}"),
                ));
            }
            params.n = value.round() as u32;
        }
        SweepParam::GI => params.g_i = value,
        SweepParam::TI => params.t_i = value,
        SweepParam::VMax => params.v_max = value,
        SweepParam::KM => params.k_m = value,
        SweepParam::S0 => params.s0 = value,
    }
    params.validate()?;
    Ok(params)
}

/// Evaluates every cell of `spec` with its engine at `eval_time`.
///
/// All cells are validated up front (row-major), so an invalid substitution
/// aborts with the offending coordinates before any work runs. Cells then
/// evaluate in parallel and assemble by index, making the result independent
/// of evaluation order.
pub fn run_sweep(spec: &GridSpec) -> Result<SweepGrid> {
    if !spec.eval_time.is_finite() || spec.eval_time <= 0.0 {
        return Err(Error::invalid(
            "eval_time",
            format!("must be > 0 s, got {}", spec.eval_time),
        ));
    }
    spec.base.validate()?;

    let mut cells: Vec<ModelParams> = Vec::with_capacity(spec.y.values.len() * spec.x.values.len());
    for &yv in &spec.y.values {
        for &xv in &spec.x.values {
            let cell = apply(&spec.base, spec.y.param, yv)
                .and_then(|p| apply(&p, spec.x.param, xv))
                .map(|p| ModelParams { t_end: spec.eval_time, ..p })
                .and_then(ModelParams::validated)
                .map_err(|err| Error::SweepCell {
                    x_name: spec.x.param.name().to_string(),
                    x_value: xv,
                    y_name: spec.y.param.name().to_string(),
                    y_value: yv,
                    source: Box::new(err),
                })?;
            cells.push(cell);
        }
    }

    let engine = spec.engine.instantiate();
    let width = spec.x.values.len();
    let values: Vec<f64> = cells
        .par_iter()
        .enumerate()
        .map(|(idx, params)| engine.cell_power(params, idx / width, idx % width))
        .collect();

    Ok(SweepGrid {
        x: spec.x.clone(),
        y: spec.y.clone(),
        base: spec.base.clone(),
        eval_time: spec.eval_time,
        engine: spec.engine,
        values,
    })
}

/// Inclusive `start..=stop` grid with uniform `step`.
pub fn range_values(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| start + k as f64 * step).collect()
}

fn probability_axis() -> Axis {
    Axis::new(SweepParam::P, range_values(0.0, 1.0, 0.05))
}

fn preset_base() -> ModelParams {
    ModelParams { s0: 0.0, ..ModelParams::default() }
}

/// Time the figure panels are read at: 5 hours.
pub const PANEL_EVAL_TIME: f64 = 18_000.0;

/// Panel (a): extraction probability versus plant count at `g_i` = 1 µM,
/// `T_i` = 60 s, read at t = 5 h.
pub fn fig5a() -> GridSpec {
    GridSpec {
        x: probability_axis(),
        y: Axis::new(SweepParam::N, (1..=50).map(f64::from).collect()),
        base: ModelParams { g_i: 1.0, t_i: 60.0, ..preset_base() },
        eval_time: PANEL_EVAL_TIME,
        engine: EngineSpec::MeanField,
    }
}

/// Panel (b): extraction probability versus extracted amount at `T_i` = 60 s,
/// `n` = 1, read at t = 5 h.
///
/// The `g_i` axis spans 0.1–20 µM: 0.1 steps below 1 µM (stopping at 0.8 so
/// the sub-µM rows stay inside the near-zero-power regime even at their
/// post-injection peaks), then 0.5 steps up to 20 µM.
pub fn fig5b() -> GridSpec {
    let mut g_values = range_values(0.1, 0.8, 0.1);
    g_values.extend(range_values(1.0, 20.0, 0.5));
    GridSpec {
        x: probability_axis(),
        y: Axis::new(SweepParam::GI, g_values),
        base: ModelParams { n: 1, t_i: 60.0, ..preset_base() },
        eval_time: PANEL_EVAL_TIME,
        engine: EngineSpec::MeanField,
    }
}

/// Panel (c): extraction probability versus signaling interval at
/// `g_i` = 10 µM, `n` = 1, read at t = 5 h.
///
/// The `T_i` axis takes the divisors of the 18000 s evaluation time within
/// 10–600 s, so every cell is read at an injection boundary (the same orbit
/// phase); mixing phases would alias the periodic ripple into the comparison
/// across rows.
pub fn fig5c() -> GridSpec {
    let t_values: Vec<f64> = (10..=600)
        .filter(|d| 18_000 % d == 0)
        .map(f64::from)
        .collect();
    GridSpec {
        x: probability_axis(),
        y: Axis::new(SweepParam::TI, t_values),
        base: ModelParams { n: 1, g_i: 10.0, ..preset_base() },
        eval_time: PANEL_EVAL_TIME,
        engine: EngineSpec::MeanField,
    }
}

/// Looks up a figure preset by name (`fig5a`, `fig5b`, `fig5c`).
pub fn preset(name: &str) -> Result<GridSpec> {
    match name {
        "fig5a" => Ok(fig5a()),
        "fig5b" => Ok(fig5b()),
        "fig5c" => Ok(fig5c()),
        other => Err(Error::invalid(
            "preset",
            format!("unknown preset `{other}` (expected fig5a, fig5b or fig5c)"),
        )),
    }
}

/// Writes the sweep as CSV: `y_name,y_value,x_name,x_value,power_mw_cm2`,
/// row-major by (y, x).
pub fn write_csv<W: Write>(grid: &SweepGrid, mut w: W) -> std::io::Result<()> {
    writeln!(w, "y_name,y_value,x_name,x_value,power_mw_cm2")?;
    for (yi, &yv) in grid.y.values.iter().enumerate() {
        for (xi, &xv) in grid.x.values.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{}",
                grid.y.param,
                yv,
                grid.x.param,
                xv,
                grid.value(yi, xi)
            )?;
        }
    }
    Ok(())
}

/// Decorative heatmap of the grid; the CSV is the contract.
pub fn to_svg(grid: &SweepGrid) -> String {
    svg::heatmap(
        &format!("power density at t = {} s [mW/cm²], engine {}", grid.eval_time, grid.engine),
        grid.x.param.name(),
        grid.y.param.name(),
        &grid.x.values,
        &grid.y.values,
        &grid.values,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanfield::{integrate_mean_field, steady_state};

    fn tiny_spec() -> GridSpec {
        GridSpec {
            x: Axis::new(SweepParam::P, vec![0.0, 0.25, 0.5, 0.75, 1.0]),
            y: Axis::new(SweepParam::N, vec![1.0, 2.0, 4.0]),
            base: ModelParams { g_i: 2.0, ..ModelParams::default() },
            eval_time: 600.0,
            engine: EngineSpec::MeanField,
        }
    }

    #[test]
    fn zero_probability_row_is_dark() {
        let grid = run_sweep(&tiny_spec()).unwrap();
        for yi in 0..grid.height() {
            assert_eq!(grid.value(yi, 0), 0.0);
        }
    }

    #[test]
    fn mean_field_rows_monotone_in_p() {
        let grid = run_sweep(&tiny_spec()).unwrap();
        for yi in 0..grid.height() {
            for xi in 1..grid.width() {
                assert!(grid.value(yi, xi) >= grid.value(yi, xi - 1));
            }
        }
    }

    #[test]
    fn single_cell_sweep_equals_trajectory_endpoint() {
        let spec = GridSpec {
            x: Axis::new(SweepParam::P, vec![0.5]),
            y: Axis::new(SweepParam::N, vec![1.0]),
            base: ModelParams::default(),
            eval_time: 600.0,
            engine: EngineSpec::MeanField,
        };
        let grid = run_sweep(&spec).unwrap();
        let params = ModelParams { t_end: 600.0, ..ModelParams::default() };
        let traj = integrate_mean_field(&params);
        assert_eq!(grid.value(0, 0).to_bits(), traj.final_point().p.to_bits());
    }

    #[test]
    fn invalid_substitution_names_the_cell() {
        let spec = GridSpec {
            x: Axis::new(SweepParam::P, vec![0.0, 1.2]),
            ..tiny_spec()
        };
        match run_sweep(&spec) {
            Err(Error::SweepCell { x_name, x_value, y_value, .. }) => {
                assert_eq!(x_name, "p");
                assert_eq!(x_value, 1.2);
                assert_eq!(y_value, 1.0);
            }
            other => panic!("expected SweepCell error, got {other:?}"),
        }
    }

    #[test]
    fn fractional_plant_count_is_rejected() {
        let spec = GridSpec {
            y: Axis::new(SweepParam::N, vec![1.0, 2.5]),
            ..tiny_spec()
        };
        assert!(matches!(run_sweep(&spec), Err(Error::SweepCell { .. })));
    }

    #[test]
    fn near_steady_cells_match_closed_form() {
        // Premise of the steady-state agreement check: small, frequent
        // injections (ripple well under 1%·P_max) and a horizon long past
        // the transient, read at an injection boundary.
        let spec = GridSpec {
            x: Axis::new(SweepParam::P, vec![0.2, 0.5, 0.8, 1.0]),
            y: Axis::new(SweepParam::GI, vec![0.05, 0.2, 0.5]),
            base: ModelParams { n: 1, t_i: 10.0, ..ModelParams::default() },
            eval_time: 5_000.0,
            engine: EngineSpec::MeanField,
        };
        let grid = run_sweep(&spec).unwrap();
        for (yi, &g_i) in spec.y.values.iter().enumerate() {
            for (xi, &p) in spec.x.values.iter().enumerate() {
                let cell_params = ModelParams { g_i, p, ..spec.base.clone() };
                let ss = steady_state(&cell_params);
                let predicted = spec.base.p_max * ss.r.min(spec.base.v_max) / spec.base.v_max;
                assert!(
                    (grid.value(yi, xi) - predicted).abs() < 0.01 * spec.base.p_max,
                    "cell (g_i={g_i}, p={p}): {} vs steady-state {predicted}",
                    grid.value(yi, xi)
                );
            }
        }
    }

    #[test]
    fn monte_carlo_sweep_is_reproducible() {
        let spec = GridSpec {
            x: Axis::new(SweepParam::P, vec![0.3, 0.6]),
            y: Axis::new(SweepParam::N, vec![1.0, 3.0]),
            base: ModelParams { t_end: 300.0, ..ModelParams::default() },
            eval_time: 300.0,
            engine: EngineSpec::MonteCarlo { num_runs: 6, master_seed: 91 },
        };
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.values.iter().all(|v| (0.0..1.0).contains(v)));
    }

    #[test]
    fn presets_cover_the_captioned_settings() {
        let a = fig5a();
        assert_eq!(a.base.g_i, 1.0);
        assert_eq!(a.x.values.len(), 21);
        assert_eq!(a.y.values.len(), 50);
        assert_eq!(*a.x.values.last().unwrap(), 1.0);

        let b = fig5b();
        assert_eq!(b.base.n, 1);
        assert_eq!(b.y.values[0], 0.1);
        assert!(b.y.values.iter().all(|&g| !(0.81..1.0).contains(&g)));
        assert_eq!(*b.y.values.last().unwrap(), 20.0);

        let c = fig5c();
        assert_eq!(c.base.g_i, 10.0);
        assert!(c.y.values.iter().all(|&t| (18_000.0 / t).fract() == 0.0));
        assert_eq!(c.y.values[0], 10.0);
        assert_eq!(*c.y.values.last().unwrap(), 600.0);

        assert!(preset("fig5a").is_ok());
        assert!(preset("fig9z").is_err());
    }

    #[test]
    fn csv_emission_round_trips_values() {
        let grid = run_sweep(&tiny_spec()).unwrap();
        let mut buf = Vec::new();
        write_csv(&grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "y_name,y_value,x_name,x_value,power_mw_cm2");
        let mut count = 0;
        for (idx, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[0], "n");
            assert_eq!(fields[2], "p");
            let value: f64 = fields[4].parse().unwrap();
            assert_eq!(value.to_bits(), grid.values[idx].to_bits());
            count += 1;
        }
        assert_eq!(count, grid.values.len());
    }

    #[test]
    fn svg_smoke() {
        let grid = run_sweep(&tiny_spec()).unwrap();
        let svg = to_svg(&grid);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("</svg>"));
        assert!(svg.contains("rect"));
    }
}
