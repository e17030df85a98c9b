//! Exact stochastic simulation of the extraction/consumption process with
//! reproducible seeding and ensemble statistics.
//!
//! # Reproducibility contract
//!
//! Outputs are deterministic across platforms, crate rebuilds and worker
//! counts. Everything that touches randomness is pinned:
//!
//! - **Generator family**: ChaCha8 ([`rand_chacha::ChaCha8Rng`]), one
//!   independent stream per trajectory, seeded with `seed_from_u64`.
//! - **Seed splitting**: per-run seeds are derived from the master seed and
//!   the run index through [`run_seed`] (SplitMix64 finalizer, see [`mix64`]);
//!   sweep cells mix their grid coordinates in via [`cell_seed`].
//! - **Extraction sampling**: one interval draws `n` Bernoulli(p) variates in
//!   plant order, each consuming exactly one `f64` from the stream
//!   (`rng.random::<f64>() < p`). This is an exact binomial sampler.
//! - **Aggregation**: per-run results are reduced in run-index order, so the
//!   statistics are independent of thread count and scheduling.
//!
//! The simulation itself reuses the mean-field step driver; randomness enters
//! only through the injection amounts, exactly as the extraction model
//! prescribes. With p = 0 or p = 1 the injection amounts degenerate to the
//! expected value and the output is bit-identical to the mean-field engine.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::kinetics::{ModelParams, Trajectory};
use crate::meanfield::{collect_monte_carlo, drive};

/// SplitMix64 finalizer: a fixed, documented 64-bit avalanche mixer.
#[inline]
pub fn mix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for run `run_index` of an ensemble keyed by `master_seed`.
#[inline]
pub fn run_seed(master_seed: u64, run_index: u64) -> u64 {
    mix64(master_seed ^ mix64(run_index))
}

/// Seed for the sweep cell at (`row`, `col`) keyed by `master_seed`;
/// neighboring cells get unrelated streams.
#[inline]
pub fn cell_seed(master_seed: u64, row: u64, col: u64) -> u64 {
    mix64(mix64(master_seed ^ mix64(row)) ^ col.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

/// Samples one interval's injection: `g_i·B` with `B ~ Binomial(n, p)`,
/// drawn as `n` sequential Bernoulli(p) trials \[µM\].
pub fn sample_extraction(n: u32, p: f64, g_i: f64, rng: &mut impl Rng) -> f64 {
    let mut successes = 0u32;
    for _ in 0..n {
        if rng.random::<f64>() < p {
            successes += 1;
        }
    }
    g_i * f64::from(successes)
}

/// Simulates one stochastic trajectory: the mean-field integrator and
/// injection schedule, with each injection amount drawn by
/// [`sample_extraction`] from the stream seeded with `seed`.
pub fn simulate_trajectory(params: &ModelParams, seed: u64) -> Trajectory {
    params.validate().expect("ModelParams must be validated before simulation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    collect_monte_carlo(
        params,
        |_| sample_extraction(params.n, params.p, params.g_i, &mut rng),
        seed,
    )
}

/// Per-time-point ensemble statistics over seeded Monte Carlo runs.
///
/// Reported on the strided step grid: indices `0, stride, 2·stride, …` plus
/// the final step. `std_p` is the population standard deviation (zero for a
/// single run); quantiles use the nearest-rank rule on the sorted per-run
/// values, so they are exact order statistics with no interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    /// Sample times \[s\].
    pub times: Vec<f64>,
    pub mean_p: Vec<f64>,
    pub std_p: Vec<f64>,
    pub q05_p: Vec<f64>,
    pub q50_p: Vec<f64>,
    pub q95_p: Vec<f64>,
    /// Ensemble mean concentration \[µM\].
    pub mean_s: Vec<f64>,
    /// Total injected glucose per run, in run-index order \[µM\]; kept so
    /// injection-moment checks can be made against the binomial expectation.
    pub run_injected_totals: Vec<f64>,
    pub num_runs: usize,
    pub master_seed: u64,
}

impl EnsembleStats {
    pub fn mean_injected_total(&self) -> f64 {
        self.run_injected_totals.iter().sum::<f64>() / self.num_runs as f64
    }
}

struct RunOutcome {
    p: Vec<f64>,
    s: Vec<f64>,
    injected: f64,
}

fn simulate_strided(params: &ModelParams, seed: u64, stride: usize, n_points: usize) -> RunOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = RunOutcome {
        p: Vec::with_capacity(n_points),
        s: Vec::with_capacity(n_points),
        injected: 0.0,
    };
    let num_steps = params.num_steps();
    drive(
        params,
        |_| {
            let amount = sample_extraction(params.n, params.p, params.g_i, &mut rng);
            out.injected += amount;
            amount
        },
        |i, _, s| {
            if i % stride as u64 == 0 || i == num_steps {
                out.s.push(s);
                out.p.push(params.p_max * (s / (params.k_m + s)));
            }
        },
    );
    out
}

/// Runs `num_runs` independent trajectories (seeds derived from
/// `master_seed` by [`run_seed`]) and aggregates them in run-index order.
///
/// Runs execute in parallel; the reduction order is fixed, so the result is
/// bit-identical for any worker count.
pub fn run_ensemble(
    params: &ModelParams,
    num_runs: usize,
    master_seed: u64,
    output_stride: usize,
) -> EnsembleStats {
    params.validate().expect("ModelParams must be validated before simulation");
    assert!(num_runs >= 1, "num_runs must be at least 1");
    assert!(output_stride >= 1, "output_stride must be at least 1");

    let num_steps = params.num_steps();
    let mut times: Vec<f64> = (0..=num_steps)
        .step_by(output_stride)
        .map(|i| i as f64 * params.dt)
        .collect();
    if num_steps % output_stride as u64 != 0 {
        times.push(num_steps as f64 * params.dt);
    }
    let n_points = times.len();

    let runs: Vec<RunOutcome> = (0..num_runs as u64)
        .into_par_iter()
        .map(|idx| simulate_strided(params, run_seed(master_seed, idx), output_stride, n_points))
        .collect();

    let mut stats = EnsembleStats {
        times,
        mean_p: Vec::with_capacity(n_points),
        std_p: Vec::with_capacity(n_points),
        q05_p: Vec::with_capacity(n_points),
        q50_p: Vec::with_capacity(n_points),
        q95_p: Vec::with_capacity(n_points),
        mean_s: Vec::with_capacity(n_points),
        run_injected_totals: runs.iter().map(|r| r.injected).collect(),
        num_runs,
        master_seed,
    };

    let mut column = vec![0.0f64; num_runs];
    for j in 0..n_points {
        // Welford in run-index order: an all-equal column yields exactly
        // zero variance, which keeps the degenerate p ∈ {0, 1} contract.
        let mut mean = 0.0f64;
        let mut m2 = 0.0f64;
        let mut mean_s = 0.0f64;
        for (k, run) in runs.iter().enumerate() {
            let x = run.p[j];
            column[k] = x;
            let count = (k + 1) as f64;
            let delta = x - mean;
            mean += delta / count;
            m2 += delta * (x - mean);
            mean_s += (run.s[j] - mean_s) / count;
        }
        column.sort_unstable_by(f64::total_cmp);
        stats.mean_p.push(mean);
        stats.std_p.push((m2 / num_runs as f64).sqrt());
        stats.q05_p.push(nearest_rank(&column, 0.05));
        stats.q50_p.push(nearest_rank(&column, 0.50));
        stats.q95_p.push(nearest_rank(&column, 0.95));
        stats.mean_s.push(mean_s);
    }
    stats
}

/// Nearest-rank quantile of a sorted slice: the ⌈q·N⌉-th smallest value.
fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}
