//! Deterministic integration of the expected-value dynamics with impulsive
//! injections, plus the closed-form steady state.
//!
//! Between injections the anode concentration obeys the one-dimensional ODE
//! `dS/dt = -V_max·S/(K_m+S)`, integrated with classical fixed-step RK4.
//! An injection of `n·g_i·p` lands instantaneously at every `t = k·T_i`
//! (k = 1, 2, …, k·T_i ≤ t_end); the emitted sample at an injection time is
//! the post-injection state, matching the floor-count of injections in the
//! influx term. `T_i` being a whole multiple of `dt` (enforced at parameter
//! construction) keeps injections exactly on step boundaries.
//!
//! Note the expectation is passed through the nonlinear consumption term
//! here (a moment-closure approximation); the `montecarlo` module is the
//! exact reference and the gap between the two is reported, not hidden.

use crate::error::{Error, Result};
use crate::kinetics::{
    saturation, Impulse, ModelParams, Trajectory, TrajectoryKind, TrajectoryPoint,
};

/// One classical RK4 step of `ds/dt = -v_max·s/(k_m+s)`.
#[inline]
pub(crate) fn rk4_step(s: f64, dt: f64, v_max: f64, k_m: f64) -> f64 {
    let f = |x: f64| -(v_max * saturation(x, k_m));
    let k1 = f(s);
    let k2 = f(s + 0.5 * dt * k1);
    let k3 = f(s + 0.5 * dt * k2);
    let k4 = f(s + dt * k3);
    s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Walks the step grid shared by every engine: RK4 between boundaries, a
/// clamp at zero, `injection(k)` applied at the k-th interval boundary, and
/// every grid state handed to `sink(step_index, t, s)`.
///
/// The mean-field and Monte Carlo engines both run through here, so their
/// arithmetic is identical step for step; only the injection closure differs.
/// That is what makes the degenerate cases (p = 0, p = 1) agree bit for bit.
pub(crate) fn drive(
    params: &ModelParams,
    mut injection: impl FnMut(u64) -> f64,
    mut sink: impl FnMut(u64, f64, f64),
) {
    let m = params.steps_per_interval();
    let num_steps = params.num_steps();
    let mut s = params.s0;
    sink(0, 0.0, s);
    for i in 1..=num_steps {
        s = rk4_step(s, params.dt, params.v_max, params.k_m).max(0.0);
        if i % m == 0 {
            s += injection(i / m);
        }
        sink(i, i as f64 * params.dt, s);
    }
}

fn collect_trajectory(
    params: &ModelParams,
    mut injection: impl FnMut(u64) -> f64,
    kind: TrajectoryKind,
) -> Trajectory {
    let mut points = Vec::with_capacity(params.num_steps() as usize + 1);
    let mut impulses = Vec::with_capacity((params.num_steps() / params.steps_per_interval()) as usize);
    drive(
        params,
        |k| {
            let amount = injection(k);
            impulses.push(Impulse {
                interval: k,
                t: (k * params.steps_per_interval()) as f64 * params.dt,
                amount,
            });
            amount
        },
        |_, t, s| {
            points.push(TrajectoryPoint {
                t,
                s,
                v: params.v_max * saturation(s, params.k_m),
                p: params.p_max * saturation(s, params.k_m),
            });
        },
    );
    Trajectory {
        points,
        impulses,
        params_digest: params.digest(),
        kind,
    }
}

/// Integrates the expected-value dynamics over the full horizon, emitting a
/// sample every `dt`.
pub fn integrate_mean_field(params: &ModelParams) -> Trajectory {
    params.validate().expect("ModelParams must be validated before integration");
    let amount = params.mean_injection();
    collect_trajectory(params, |_| amount, TrajectoryKind::MeanField)
}

pub(crate) fn collect_monte_carlo(
    params: &ModelParams,
    injection: impl FnMut(u64) -> f64,
    seed: u64,
) -> Trajectory {
    collect_trajectory(params, injection, TrajectoryKind::MonteCarlo { seed })
}

/// Final-state shortcut for sweep cells: same grid walk as the trajectory
/// path, but only the last state is kept.
pub(crate) fn final_power(params: &ModelParams, injection: impl FnMut(u64) -> f64) -> f64 {
    let mut last = params.s0;
    drive(params, injection, |_, _, s| last = s);
    params.p_max * saturation(last, params.k_m)
}

/// Long-run regime of the mean influx / consumption balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Mean influx below `V_max`: the concentration settles around a finite
    /// periodic orbit.
    Bounded,
    /// Mean influx at or above `V_max`: glucose accumulates without bound and
    /// the power density climbs toward `P_max`.
    Saturating,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Bounded => write!(f, "bounded"),
            Regime::Saturating => write!(f, "saturating"),
        }
    }
}

/// Equilibrium of the mean-field model: consumption rate equal to the mean
/// influx rate `r = n·g_i·p/T_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub regime: Regime,
    /// Equilibrium concentration `K_m·r/(V_max−r)` \[µM\]; only finite in the
    /// bounded regime.
    pub s_star: Option<f64>,
    /// Long-run power density `P_max·min(r, V_max)/V_max` \[mW/cm²\]
    /// (asymptotic in the saturating regime).
    pub p_star: f64,
    /// Mean influx rate \[µM/s\].
    pub r: f64,
}

/// Closed-form steady state of the mean-field dynamics.
pub fn steady_state(params: &ModelParams) -> SteadyState {
    params.validate().expect("ModelParams must be validated before analysis");
    let r = params.mean_injection() / params.t_i;
    if r < params.v_max {
        SteadyState {
            regime: Regime::Bounded,
            s_star: Some(params.k_m * r / (params.v_max - r)),
            p_star: params.p_max * r / params.v_max,
            r,
        }
    } else {
        SteadyState {
            regime: Regime::Saturating,
            s_star: None,
            p_star: params.p_max,
            r,
        }
    }
}

/// First emitted time at which the mean-field power density reaches
/// `fraction·P*`, or `None` when the horizon ends first.
///
/// Only meaningful in the bounded regime; a saturating parameter set has no
/// finite `P*` to take a fraction of and yields a domain error. A zero `P*`
/// (no influx) is treated as never reached.
pub fn time_to_fraction(params: &ModelParams, fraction: f64) -> Result<Option<f64>> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::invalid(
            "fraction",
            format!("must be strictly between 0 and 1, got {fraction}"),
        ));
    }
    let ss = steady_state(params);
    if ss.regime == Regime::Saturating {
        return Err(Error::Domain(format!(
            "no finite steady-state power to take a fraction of: mean influx r = {} µM/s \
             is at or above V_max = {} µM/s (saturating regime)",
            ss.r, params.v_max
        )));
    }
    if ss.p_star == 0.0 {
        return Ok(None);
    }
    let threshold = fraction * ss.p_star;
    let trajectory = integrate_mean_field(params);
    Ok(trajectory
        .points
        .iter()
        .find(|pt| pt.p >= threshold)
        .map(|pt| pt.t))
}
