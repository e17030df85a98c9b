//! `biocell` — respiration-based biocell energy harvesting simulator.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "biocell",
    version,
    about = "Respiration-based biocell energy harvesting simulator",
    long_about = "Simulates glucose extraction from connected plants feeding a \
                  mitochondrial biocell anode: stochastic or expected-value injections \
                  every signaling interval, Michaelis-Menten consumption in between, \
                  and the resulting power-density trajectory. All outputs are \
                  deterministic given the full flag set; Monte Carlo runs require an \
                  explicit seed."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one trajectory and write it as CSV
    Simulate(SimulateArgs),
    /// Run a seeded Monte Carlo ensemble and write per-time statistics
    Ensemble(EnsembleArgs),
    /// Evaluate a two-axis parameter sweep (figure presets or explicit axes)
    Sweep(SweepArgs),
    /// Print the closed-form steady-state report for a parameter set
    Steady(SteadyArgs),
    /// Emit the respiration-vs-photosynthetic performance scatter
    Compare(CompareArgs),
}

/// Model parameters; unset flags fall back to the config file, then to the
/// built-in defaults (n=1, g_i=10 µM, p=0.5, T_i=60 s, V_max=0.25 µM/s,
/// K_m=30 µM, P_max=1 mW/cm², s0=0 µM, t_end=18000 s, dt=0.1 s).
#[derive(Args, Debug, Clone, Default)]
struct ParamFlags {
    /// Number of connected plants
    #[arg(long)]
    n: Option<u32>,
    /// Glucose increment per successful extraction [µM]
    #[arg(long)]
    g_i: Option<f64>,
    /// Extraction success probability per plant per interval (0 to 1)
    #[arg(long)]
    p: Option<f64>,
    /// Signaling interval [s]; must be a whole multiple of --dt
    #[arg(long)]
    t_i: Option<f64>,
    /// Maximum catalytic rate [µM/s]
    #[arg(long)]
    v_max: Option<f64>,
    /// Half-saturation constant [µM]
    #[arg(long)]
    k_m: Option<f64>,
    /// Maximum power density [mW/cm²]
    #[arg(long)]
    p_max: Option<f64>,
    /// Initial anode glucose concentration [µM]
    #[arg(long)]
    s0: Option<f64>,
    /// Simulation horizon [s]
    #[arg(long)]
    t_end: Option<f64>,
    /// Integrator step [s]
    #[arg(long)]
    dt: Option<f64>,
    /// Flat `key = value` config file; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
struct EngineFlags {
    /// Simulation engine: mean-field or monte-carlo
    #[arg(long)]
    engine: Option<String>,
    /// Master seed [64-bit]; required by the monte-carlo engine (runs never
    /// seed themselves from the clock)
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte Carlo runs
    #[arg(long)]
    runs: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
struct RunFlags {
    /// Cap on rayon worker threads (results do not depend on this)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    engine: EngineFlags,
    #[command(flatten)]
    run: RunFlags,
    /// Trajectory CSV path
    #[arg(long, default_value = "trajectory.csv")]
    out: PathBuf,
    /// Optional SVG line chart path
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write every k-th sample to the CSV (the final sample is always kept)
    #[arg(long, default_value_t = 1)]
    stride: usize,
}

#[derive(Args)]
struct EnsembleArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Master seed [64-bit]; required (runs never seed themselves from the clock)
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte Carlo runs
    #[arg(long)]
    runs: Option<usize>,
    #[command(flatten)]
    run: RunFlags,
    /// Ensemble statistics CSV path
    #[arg(long, default_value = "ensemble.csv")]
    out: PathBuf,
    /// Optional SVG chart path (mean with the 5%/95% quantile band)
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Report statistics every k-th integrator step
    #[arg(long)]
    stride: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    engine: EngineFlags,
    #[command(flatten)]
    run: RunFlags,
    /// Figure preset: fig5a (p × n), fig5b (p × g_i) or fig5c (p × T_i)
    #[arg(long, conflicts_with_all = ["x_axis", "y_axis"])]
    preset: Option<String>,
    /// X axis as `param=start:stop:step` or `param=v1,v2,...`
    /// (params: p, n, g_i, T_i, V_max, K_m, s0)
    #[arg(long)]
    x_axis: Option<String>,
    /// Y axis, same syntax as --x-axis
    #[arg(long)]
    y_axis: Option<String>,
    /// Time at which each cell's power is read [s]
    #[arg(long)]
    eval_time: Option<f64>,
    /// Sweep CSV path
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
    /// Optional SVG heatmap path
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SteadyArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Optional path for the report text
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Record CSVs to merge with the built-in respiration records
    /// (schema: see `data/photosynthetic_template.csv`)
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Scatter CSV path
    #[arg(long, default_value = "comparison.csv")]
    out: PathBuf,
    /// Optional SVG scatter path
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Also write the merged records in the ingestible record schema
    #[arg(long)]
    records_out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Ensemble(args) => commands::ensemble(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Steady(args) => commands::steady(args),
        Command::Compare(args) => commands::compare(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
