//! Simulation engines behind a common strategy trait, registered by name and
//! selected at runtime from the CLI or a config file.
//!
//! Two engines ship built in: `mean-field` (deterministic expected-value
//! integration) and `monte-carlo` (exact stochastic simulation averaged over
//! seeded runs). Both deliver the same two products — a trajectory over the
//! parameter horizon and a power value for one sweep cell — so sweeps and the
//! simulate command are engine-agnostic.

use crate::error::{Error, Result};
use crate::kinetics::{ModelParams, Trajectory};
use crate::meanfield::{final_power, integrate_mean_field};
use crate::montecarlo::{cell_seed, run_seed, sample_extraction, simulate_trajectory};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One interchangeable simulation strategy.
pub trait Engine: Send + Sync {
    /// Registry name of this engine.
    fn name(&self) -> &'static str;

    /// One trajectory over the full `params` horizon.
    fn trajectory(&self, params: &ModelParams) -> Trajectory;

    /// Power density at the end of the `params` horizon for the sweep cell at
    /// (`row`, `col`). Stochastic engines mix the coordinates into their seed
    /// so neighboring cells use unrelated streams.
    fn cell_power(&self, params: &ModelParams, row: usize, col: usize) -> f64;
}

/// Serializable description of an engine choice; [`instantiate`]
/// (EngineSpec::instantiate) turns it into a runnable strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineSpec {
    MeanField,
    MonteCarlo { num_runs: usize, master_seed: u64 },
}

impl EngineSpec {
    pub fn instantiate(&self) -> Box<dyn Engine> {
        match *self {
            EngineSpec::MeanField => Box::new(MeanFieldEngine),
            EngineSpec::MonteCarlo { num_runs, master_seed } => {
                Box::new(MonteCarloEngine { num_runs, master_seed })
            }
        }
    }
}

impl std::fmt::Display for EngineSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EngineSpec::MeanField => write!(f, "mean-field"),
            EngineSpec::MonteCarlo { num_runs, master_seed } => {
                write!(f, "monte-carlo(runs={num_runs}, seed={master_seed})")
            }
        }
    }
}

/// Deterministic expected-value engine.
pub struct MeanFieldEngine;

impl Engine for MeanFieldEngine {
    fn name(&self) -> &'static str {
        "mean-field"
    }

    fn trajectory(&self, params: &ModelParams) -> Trajectory {
        integrate_mean_field(params)
    }

    fn cell_power(&self, params: &ModelParams, _row: usize, _col: usize) -> f64 {
        let amount = params.mean_injection();
        final_power(params, |_| amount)
    }
}

/// Stochastic engine: trajectories drawn with ChaCha8 streams, cell values
/// averaged over `num_runs` independent runs.
pub struct MonteCarloEngine {
    pub num_runs: usize,
    pub master_seed: u64,
}

impl Engine for MonteCarloEngine {
    fn name(&self) -> &'static str {
        "monte-carlo"
    }

    /// Run 0 of the ensemble keyed by the master seed, so a single simulate
    /// agrees with the first run of `run_ensemble` on the same seed.
    fn trajectory(&self, params: &ModelParams) -> Trajectory {
        simulate_trajectory(params, run_seed(self.master_seed, 0))
    }

    fn cell_power(&self, params: &ModelParams, row: usize, col: usize) -> f64 {
        let cell = cell_seed(self.master_seed, row as u64, col as u64);
        let mut mean = 0.0f64;
        for run in 0..self.num_runs as u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(cell, run));
            let last =
                final_power(params, |_| sample_extraction(params.n, params.p, params.g_i, &mut rng));
            mean += (last - mean) / (run + 1) as f64;
        }
        mean
    }
}

/// Options an engine factory may consume when building its spec.
#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    pub num_runs: usize,
    pub master_seed: Option<u64>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { num_runs: 100, master_seed: None }
    }
}

type Factory = fn(&EngineOptions) -> Result<EngineSpec>;

/// Name-keyed registry of engine factories.
pub struct EngineRegistry {
    entries: Vec<(&'static str, Factory)>,
}

impl EngineRegistry {
    /// Registry with the two built-in engines.
    pub fn with_builtins() -> Self {
        let mut registry = EngineRegistry { entries: Vec::new() };
        registry
            .register("mean-field", |_| Ok(EngineSpec::MeanField))
            .expect("fresh registry");
        registry
            .register("monte-carlo", |opts| {
                let master_seed = opts.master_seed.ok_or_else(|| {
                    Error::invalid(
                        "seed",
                        "the monte-carlo engine requires an explicit seed (no time-based fallback)",
                    )
                })?;
                if opts.num_runs == 0 {
                    return Err(Error::invalid("runs", "must be at least 1"));
                }
                Ok(EngineSpec::MonteCarlo { num_runs: opts.num_runs, master_seed })
            })
            .expect("fresh registry");
        registry
    }

    pub fn register(&mut self, name: &'static str, factory: Factory) -> Result<()> {
        if self.entries.iter().any(|(n, _)| *n == name) {
            return Err(Error::invalid("engine", format!("`{name}` is already registered")));
        }
        self.entries.push((name, factory));
        Ok(())
    }

    /// Builds the spec registered under `name`.
    pub fn create(&self, name: &str, opts: &EngineOptions) -> Result<EngineSpec> {
        match self.entries.iter().find(|(n, _)| *n == name) {
            Some((_, factory)) => factory(opts),
            None => Err(Error::UnknownEngine {
                name: name.to_string(),
                available: self.names().join(", "),
            }),
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }
}
