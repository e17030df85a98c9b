//! Simulator for a respiration-based biocell fed by stochastic glucose
//! extraction from connected plants.
//!
//! Each signaling interval `T_i`, every one of `n` plants yields a glucose
//! increment `g_i` with probability `p`; the anode concentration `S(t)` then
//! decays through Michaelis-Menten consumption `V_max·S/(K_m+S)` while the
//! cell delivers power density `P_max·S/(K_m+S)`.
//!
//! Two engines produce trajectories and sweep cells behind the common
//! [`engine::Engine`] trait, registered by name in
//! [`engine::EngineRegistry`]:
//!
//! - `mean-field` ([`meanfield`]): deterministic RK4 integration of the
//!   expected-value dynamics with impulsive injections, plus a closed-form
//!   steady-state oracle.
//! - `monte-carlo` ([`montecarlo`]): exact stochastic simulation with
//!   reproducible seeding and ensemble statistics.
//!
//! [`sweep`] evaluates two-axis parameter grids (including the three figure
//! presets `fig5a`/`fig5b`/`fig5c`); [`compare`] holds the published biocell
//! records and the performance scatter emission.

pub mod compare;
pub mod engine;
pub mod error;
pub mod kinetics;
pub mod meanfield;
pub mod montecarlo;
pub mod svg;
pub mod sweep;

pub use engine::{Engine, EngineOptions, EngineRegistry, EngineSpec};
pub use error::{Error, Result};
pub use kinetics::{
    expected_influx, mm_rate, power_density, Impulse, ModelParams, Trajectory, TrajectoryKind,
    TrajectoryPoint,
};
pub use meanfield::{integrate_mean_field, steady_state, time_to_fraction, Regime, SteadyState};
pub use montecarlo::{run_ensemble, sample_extraction, simulate_trajectory, EnsembleStats};
pub use sweep::{run_sweep, GridSpec, SweepGrid, SweepParam};
