//! Core domain types and the pointwise maps of the biocell model.
//!
//! Units throughout the crate: concentrations in µM, times in seconds,
//! rates in µM/s, power densities in mW/cm². Parameter validation happens
//! once, at [`ModelParams`] construction time; every downstream operation
//! assumes a validated set.

use crate::error::{Error, Result};

/// Relative tolerance for the "`T_i` is a whole multiple of `dt`" check.
const GRID_ALIGN_TOL: f64 = 1e-9;

/// Complete parameter set for one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Number of connected plants.
    pub n: u32,
    /// Glucose concentration increment per successful extraction \[µM\].
    pub g_i: f64,
    /// Extraction success probability per plant per signaling interval.
    pub p: f64,
    /// Signaling interval \[s\]; must be a whole multiple of `dt`.
    pub t_i: f64,
    /// Maximum catalytic rate of the anode mitochondria \[µM/s\].
    pub v_max: f64,
    /// Half-saturation constant: concentration at which the catalytic rate
    /// is half of `v_max` \[µM\].
    pub k_m: f64,
    /// Maximum power density of the biocell \[mW/cm²\].
    pub p_max: f64,
    /// Initial anode glucose concentration \[µM\].
    pub s0: f64,
    /// Simulation horizon \[s\].
    pub t_end: f64,
    /// Integrator step \[s\].
    pub dt: f64,
}

impl Default for ModelParams {
    /// Constants from the experimental biocell studies plus the captioned
    /// single-plant extraction setting: `P_max` = 1 mW/cm², `V_max` = 0.25
    /// µM/s, `K_m` = 30 µM, `T_i` = 60 s, `g_i` = 10 µM, `p` = 0.5, `n` = 1,
    /// horizon 5 h at `dt` = 0.1 s, empty anode at start.
    fn default() -> Self {
        ModelParams {
            n: 1,
            g_i: 10.0,
            p: 0.5,
            t_i: 60.0,
            v_max: 0.25,
            k_m: 30.0,
            p_max: 1.0,
            s0: 0.0,
            t_end: 18_000.0,
            dt: 0.1,
        }
    }
}

impl ModelParams {
    /// Checks every documented invariant. Engines call this on entry and
    /// treat a failure as a caller bug, so construct-validate-run.
    pub fn validate(&self) -> Result<()> {
        fn finite(field: &'static str, v: f64) -> Result<f64> {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::invalid(field, format!("must be finite, got {v}")))
            }
        }
        if !(0.0..=1.0).contains(&finite("p", self.p)?) {
            return Err(Error::invalid("p", format!("must be in [0, 1], got {}", self.p)));
        }
        if finite("g_i", self.g_i)? < 0.0 {
            return Err(Error::invalid("g_i", format!("must be >= 0 µM, got {}", self.g_i)));
        }
        if finite("s0", self.s0)? < 0.0 {
            return Err(Error::invalid("s0", format!("must be >= 0 µM, got {}", self.s0)));
        }
        for (field, v) in [
            ("T_i", self.t_i),
            ("V_max", self.v_max),
            ("K_m", self.k_m),
            ("P_max", self.p_max),
            ("t_end", self.t_end),
            ("dt", self.dt),
        ] {
            if finite(field, v)? <= 0.0 {
                return Err(Error::invalid(field, format!("must be > 0, got {v}")));
            }
        }
        if self.dt > self.t_i {
            return Err(Error::invalid(
                "dt",
                format!("must not exceed T_i ({} s), got {} s", self.t_i, self.dt),
            ));
        }
        let ratio = self.t_i / self.dt;
        if (ratio - ratio.round()).abs() > GRID_ALIGN_TOL * ratio.max(1.0) || ratio.round() < 1.0 {
            return Err(Error::invalid(
                "dt",
                format!(
                    "T_i ({} s) must be a whole multiple of dt ({} s); T_i/dt = {ratio}",
                    self.t_i, self.dt
                ),
            ));
        }
        Ok(())
    }

    /// Consuming variant of [`validate`](Self::validate) for builder-style use.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Integrator steps per signaling interval (exact; params validated).
    pub fn steps_per_interval(&self) -> u64 {
        (self.t_i / self.dt).round() as u64
    }

    /// Number of integrator steps covering the horizon; points are emitted at
    /// `t = k·dt` for `k = 0..=num_steps`, so the last point lands at or just
    /// before `t_end`.
    pub fn num_steps(&self) -> u64 {
        (self.t_end / self.dt + 1e-9).floor() as u64
    }

    /// Expected injection per interval, `n·g_i·p` \[µM\].
    pub fn mean_injection(&self) -> f64 {
        f64::from(self.n) * self.g_i * self.p
    }

    /// Stable 64-bit identifier of this parameter set (FNV-1a over the field
    /// bit patterns), used to tag trajectories with their origin.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        eat(&self.n.to_le_bytes());
        for v in [
            self.g_i, self.p, self.t_i, self.v_max, self.k_m, self.p_max, self.s0, self.t_end,
            self.dt,
        ] {
            eat(&v.to_bits().to_le_bytes());
        }
        h
    }
}

/// Saturation factor `S/(K_m + S)` shared by the rate and power maps, so the
/// two stay proportional bit for bit and hit exactly 1/2 at `S = K_m`.
#[inline]
pub(crate) fn saturation(s: f64, k_m: f64) -> f64 {
    s / (k_m + s)
}

/// Michaelis-Menten consumption rate `V_max·S/(K_m+S)` \[µM/s\].
///
/// Strictly below `V_max` for finite `S ≥ 0`, and exactly `V_max/2` at
/// `S = K_m`.
pub fn mm_rate(s: f64, v_max: f64, k_m: f64) -> Result<f64> {
    check_pointwise(s, k_m)?;
    if !v_max.is_finite() || v_max <= 0.0 {
        return Err(Error::invalid("V_max", format!("must be > 0 µM/s, got {v_max}")));
    }
    Ok(v_max * saturation(s, k_m))
}

/// Power density `P_max·S/(K_m+S)` \[mW/cm²\]: the consumption saturation
/// factor scaled to the cell's maximum output.
pub fn power_density(s: f64, p_max: f64, k_m: f64) -> Result<f64> {
    check_pointwise(s, k_m)?;
    if !p_max.is_finite() || p_max <= 0.0 {
        return Err(Error::invalid("P_max", format!("must be > 0 mW/cm², got {p_max}")));
    }
    Ok(p_max * saturation(s, k_m))
}

fn check_pointwise(s: f64, k_m: f64) -> Result<()> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::invalid("S", format!("must be >= 0 µM, got {s}")));
    }
    if !k_m.is_finite() || k_m <= 0.0 {
        return Err(Error::invalid("K_m", format!("must be > 0 µM, got {k_m}")));
    }
    Ok(())
}

/// Expected glucose injection per signaling interval, `n·g_i·p` \[µM\].
pub fn expected_influx(n: u32, g_i: f64, p: f64) -> Result<f64> {
    if !g_i.is_finite() || g_i < 0.0 {
        return Err(Error::invalid("g_i", format!("must be >= 0 µM, got {g_i}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", format!("must be in [0, 1], got {p}")));
    }
    Ok(f64::from(n) * g_i * p)
}

/// One emitted sample: time, concentration, consumption rate, power density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    /// Time \[s\].
    pub t: f64,
    /// Anode glucose concentration \[µM\].
    pub s: f64,
    /// Consumption rate \[µM/s\].
    pub v: f64,
    /// Power density \[mW/cm²\].
    pub p: f64,
}

/// One scheduled injection event with its realized amount.
///
/// Zero-amount events are recorded too, so interval counting stays uniform
/// across engines and mass-balance checks can reconstruct pre-injection
/// states at every boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impulse {
    /// 1-based interval index `k` (the event lands at `t = k·T_i`).
    pub interval: u64,
    /// Event time \[s\].
    pub t: f64,
    /// Realized concentration increment \[µM\].
    pub amount: f64,
}

/// Which engine produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryKind {
    MeanField,
    MonteCarlo { seed: u64 },
}

impl std::fmt::Display for TrajectoryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrajectoryKind::MeanField => write!(f, "mean-field"),
            TrajectoryKind::MonteCarlo { seed } => write!(f, "monte-carlo(seed={seed})"),
        }
    }
}

/// Time series of concentration, consumption rate and power density, sampled
/// every `dt` starting at `t = 0`. The sample at an injection time is the
/// post-injection state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    /// Injection ledger, one entry per signaling interval inside the horizon.
    pub impulses: Vec<Impulse>,
    /// [`ModelParams::digest`] of the generating parameter set.
    pub params_digest: u64,
    pub kind: TrajectoryKind,
}

impl Trajectory {
    pub fn final_point(&self) -> &TrajectoryPoint {
        self.points.last().expect("trajectory always holds the t=0 point")
    }

    /// Total glucose injected up to and including time `t` \[µM\].
    pub fn injected_up_to(&self, t: f64) -> f64 {
        self.impulses
            .iter()
            .take_while(|imp| imp.t <= t)
            .map(|imp| imp.amount)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mm_rate_half_saturation_with_paper_constants() {
        assert_eq!(mm_rate(30.0, 0.25, 30.0).unwrap(), 0.125);
    }

    #[test]
    fn mm_rate_zero_substrate() {
        assert_eq!(mm_rate(0.0, 0.25, 30.0).unwrap(), 0.0);
        assert_eq!(mm_rate(0.0, 7.3, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn mm_rate_direct_substitution() {
        // 0.25 * 90 / 120
        assert_eq!(mm_rate(90.0, 0.25, 30.0).unwrap(), 0.1875);
    }

    #[test]
    fn mm_rate_rejects_bad_inputs() {
        assert!(matches!(
            mm_rate(-1.0, 0.25, 30.0),
            Err(Error::InvalidParam { field: "S", .. })
        ));
        assert!(matches!(
            mm_rate(1.0, 0.0, 30.0),
            Err(Error::InvalidParam { field: "V_max", .. })
        ));
        assert!(matches!(
            mm_rate(1.0, 0.25, -3.0),
            Err(Error::InvalidParam { field: "K_m", .. })
        ));
        assert!(mm_rate(f64::NAN, 0.25, 30.0).is_err());
    }

    #[test]
    fn power_density_examples() {
        assert_eq!(power_density(30.0, 1.0, 30.0).unwrap(), 0.5);
        assert_eq!(power_density(0.0, 1.0, 30.0).unwrap(), 0.0);
        // 300/330 = 0.90909...
        assert!((power_density(300.0, 1.0, 30.0).unwrap() - 0.9091).abs() < 1e-4);
    }

    #[test]
    fn expected_influx_examples() {
        assert_eq!(expected_influx(5, 2.0, 0.5).unwrap(), 5.0);
        assert_eq!(expected_influx(17, 3.25, 0.0).unwrap(), 0.0);
        assert_eq!(expected_influx(1, 10.0, 1.0).unwrap(), 10.0);
    }

    #[test]
    fn expected_influx_rejects_bad_probability() {
        assert!(expected_influx(1, 1.0, 1.2).is_err());
        assert!(expected_influx(1, -1.0, 0.5).is_err());
    }

    #[test]
    fn default_params_are_valid() {
        ModelParams::default().validate().unwrap();
    }

    #[test]
    fn validation_rejects_each_bad_field() {
        let base = ModelParams::default();
        let cases: Vec<(&str, ModelParams)> = vec![
            ("p", ModelParams { p: 1.2, ..base.clone() }),
            ("p", ModelParams { p: -0.1, ..base.clone() }),
            ("g_i", ModelParams { g_i: -1.0, ..base.clone() }),
            ("s0", ModelParams { s0: -0.5, ..base.clone() }),
            ("T_i", ModelParams { t_i: 0.0, ..base.clone() }),
            ("V_max", ModelParams { v_max: 0.0, ..base.clone() }),
            ("K_m", ModelParams { k_m: -30.0, ..base.clone() }),
            ("P_max", ModelParams { p_max: 0.0, ..base.clone() }),
            ("t_end", ModelParams { t_end: 0.0, ..base.clone() }),
            ("dt", ModelParams { dt: 0.0, ..base.clone() }),
            ("dt", ModelParams { dt: 120.0, ..base.clone() }),
            // 60 / 0.7 is not a whole number of steps
            ("dt", ModelParams { dt: 0.7, ..base.clone() }),
            ("p", ModelParams { p: f64::NAN, ..base }),
        ];
        for (field, params) in cases {
            match params.validate() {
                Err(Error::InvalidParam { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected InvalidParam for `{field}`, got {other:?}"),
            }
        }
    }

    #[test]
    fn step_grid_arithmetic() {
        let params = ModelParams::default();
        assert_eq!(params.steps_per_interval(), 600);
        assert_eq!(params.num_steps(), 180_000);
        let coarse = ModelParams { dt: 60.0, ..ModelParams::default() };
        coarse.validate().unwrap();
        assert_eq!(coarse.steps_per_interval(), 1);
    }

    #[test]
    fn digest_tracks_field_changes() {
        let a = ModelParams::default();
        let b = ModelParams { p: 0.25, ..ModelParams::default() };
        assert_eq!(a.digest(), a.clone().digest());
        assert_ne!(a.digest(), b.digest());
    }

    proptest! {
        #[test]
        fn maps_are_monotone_and_bounded(
            v_max in 1e-3..10.0f64,
            k_m in 1e-2..500.0f64,
            p_max in 1e-3..10.0f64,
            mut grid in proptest::collection::vec(0.0..1e9f64, 2..40),
        ) {
            grid.sort_by(f64::total_cmp);
            let mut prev_v = -1.0;
            let mut prev_p = -1.0;
            for &s in &grid {
                let v = mm_rate(s, v_max, k_m).unwrap();
                let p = power_density(s, p_max, k_m).unwrap();
                prop_assert!(v >= prev_v, "mm_rate not monotone at S={s}");
                prop_assert!(p >= prev_p, "power_density not monotone at S={s}");
                prop_assert!((0.0..v_max).contains(&v));
                prop_assert!((0.0..p_max).contains(&p));
                // Shared saturation factor: the two maps stay proportional to
                // within the rounding of two multiplies.
                let (lhs, rhs) = (v * p_max, p * v_max);
                prop_assert!((lhs - rhs).abs() <= 2.0 * f64::EPSILON * lhs.abs().max(rhs.abs()));
                prev_v = v;
                prev_p = p;
            }
        }

        #[test]
        fn half_saturation_is_exact(
            v_max in 1e-6..1e6f64,
            k_m in 1e-6..1e6f64,
            p_max in 1e-6..1e6f64,
        ) {
            prop_assert_eq!(mm_rate(k_m, v_max, k_m).unwrap(), v_max / 2.0);
            prop_assert_eq!(power_density(k_m, p_max, k_m).unwrap(), p_max / 2.0);
        }
    }
}
