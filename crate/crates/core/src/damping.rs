//! Nonnegative damping profiles `a(t)`, their integral `A(t)`, the gauge
//! factors `exp(-k A(t))`, and the slope extremes `inf/sup A(t)/t`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Number of log-spaced samples used by [`DampingProfile::slope_extremes`]
/// for tabulated profiles.
pub const SLOPE_SAMPLES: usize = 10_000;

/// Largest `|exponent|` accepted by [`DampingProfile::gauge_factor`].
pub const GAUGE_EXPONENT_LIMIT: f64 = 700.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DampingProfile {
    Zero,
    /// `a(t) = γ`
    Constant {
        gamma: f64,
    },
    /// `a(t) = γ / (1 + t)`
    ScaledLog {
        gamma: f64,
    },
    /// Linear between knots `(t, a)`, constant after the last knot.
    /// The first knot sits at `t = 0`.
    Table {
        knots: Vec<(f64, f64)>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeExtremes {
    pub lower: f64,
    pub upper: f64,
}

impl DampingProfile {
    pub fn constant(gamma: f64) -> Result<Self> {
        let p = DampingProfile::Constant { gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn scaled_log(gamma: f64) -> Result<Self> {
        let p = DampingProfile::ScaledLog { gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn table(knots: Vec<(f64, f64)>) -> Result<Self> {
        let p = DampingProfile::Table { knots };
        p.validate()?;
        Ok(p)
    }

    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            DampingProfile::Zero => {}
            DampingProfile::Constant { gamma } | DampingProfile::ScaledLog { gamma } => {
                if !(gamma.is_finite() && *gamma >= 0.0) {
                    out.push(format!("gamma must be finite and >= 0 (got {gamma})"));
                }
            }
            DampingProfile::Table { knots } => {
                if knots.is_empty() {
                    out.push("knots must not be empty".to_string());
                } else if knots[0].0 != 0.0 {
                    out.push(format!("first knot must sit at t = 0 (got {})", knots[0].0));
                }
                for (i, &(t, a)) in knots.iter().enumerate() {
                    if !(t.is_finite() && a.is_finite()) {
                        out.push(format!("knot {i} is not finite"));
                    }
                    if a < 0.0 {
                        out.push(format!("knot {i}: a = {a} is negative"));
                    }
                    if i > 0 && !(t > knots[i - 1].0) {
                        out.push(format!("knot {i}: times must be strictly increasing"));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.issues().into_iter().next() {
            None => Ok(()),
            Some(reason) => Err(invalid("damping", reason)),
        }
    }

    /// `a(|t|)`.
    pub fn rate(&self, t: f64) -> f64 {
        let t = t.abs();
        match self {
            DampingProfile::Zero => 0.0,
            DampingProfile::Constant { gamma } => *gamma,
            DampingProfile::ScaledLog { gamma } => gamma / (1.0 + t),
            DampingProfile::Table { knots } => {
                let last = knots[knots.len() - 1];
                if t >= last.0 {
                    return last.1;
                }
                let k = knots.partition_point(|&(tk, _)| tk <= t);
                let (t0, a0) = knots[k - 1];
                let (t1, a1) = knots[k];
                a0 + (a1 - a0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// `A(t) = ∫_0^{|t|} a(s) ds`, exact for every kind.
    pub fn integral(&self, t: f64) -> f64 {
        let t = t.abs();
        match self {
            DampingProfile::Zero => 0.0,
            DampingProfile::Constant { gamma } => gamma * t,
            DampingProfile::ScaledLog { gamma } => gamma * t.ln_1p(),
            DampingProfile::Table { knots } => {
                let mut acc = 0.0;
                for pair in knots.windows(2) {
                    let (t0, a0) = pair[0];
                    let (t1, a1) = pair[1];
                    if t <= t0 {
                        return acc;
                    }
                    let end = t.min(t1);
                    let a_end = a0 + (a1 - a0) * (end - t0) / (t1 - t0);
                    acc += 0.5 * (a0 + a_end) * (end - t0);
                    if t <= t1 {
                        return acc;
                    }
                }
                let (tl, al) = knots[knots.len() - 1];
                acc + al * (t - tl).max(0.0)
            }
        }
    }

    /// `(inf, sup)` of `A(t)/t`.
    ///
    /// Built-in kinds return the exact extremes over all `t > 0`;
    /// tables are sampled on `(0, t_max]` (log-spaced, plus knots and the
    /// `t → 0+` limit `a(0)`).
    pub fn slope_extremes(&self, t_max: f64) -> SlopeExtremes {
        match self {
            DampingProfile::Zero => SlopeExtremes { lower: 0.0, upper: 0.0 },
            DampingProfile::Constant { gamma } => SlopeExtremes {
                lower: *gamma,
                upper: *gamma,
            },
            // ln(1+t)/t decreases from 1 (t → 0+) to 0 (t → ∞)
            DampingProfile::ScaledLog { gamma } => SlopeExtremes {
                lower: 0.0,
                upper: *gamma,
            },
            DampingProfile::Table { knots } => {
                let mut lower = self.rate(0.0);
                let mut upper = lower;
                let mut visit = |t: f64| {
                    if t > 0.0 && t <= t_max {
                        let s = self.integral(t) / t;
                        lower = lower.min(s);
                        upper = upper.max(s);
                    }
                };
                for &(t, _) in knots.iter() {
                    visit(t);
                }
                let first_scale = knots.iter().map(|k| k.0).find(|&t| t > 0.0).unwrap_or(t_max).min(t_max);
                let t_min = first_scale * 1e-4;
                let ratio = (t_max / t_min).ln() / (SLOPE_SAMPLES - 1) as f64;
                for i in 0..SLOPE_SAMPLES {
                    visit(t_min * (ratio * i as f64).exp());
                }
                visit(t_max);
                SlopeExtremes { lower, upper }
            }
        }
    }

    /// `exp(-k A(t))`: `k = -1` is the gauge `u → v = e^{A} u`, `k = p-1`
    /// the coefficient of the gauged nonlinearity.
    pub fn gauge_factor(&self, t: f64, k: f64) -> Result<f64> {
        let exponent = -k * self.integral(t);
        if exponent > GAUGE_EXPONENT_LIMIT {
            return Err(Error::GaugeOverflow { exponent });
        }
        Ok(exponent.exp())
    }

    /// Profiles that may vanish on intervals produce exploratory results only.
    pub fn is_exploratory(&self) -> bool {
        match self {
            DampingProfile::Table { knots } => knots.iter().any(|k| k.1 == 0.0),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integral_closed_forms() {
        let c = DampingProfile::constant(0.3).unwrap();
        assert!((c.integral(2.0) - 0.6).abs() < 1e-15);
        let l = DampingProfile::scaled_log(1.0).unwrap();
        assert!((l.integral(std::f64::consts::E - 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(DampingProfile::Zero.integral(17.0), 0.0);
        // negative time uses |t|
        assert_eq!(c.integral(-2.0), c.integral(2.0));
    }

    #[test]
    fn table_integral_is_trapezoid_exact() {
        let tab = DampingProfile::table(vec![(0.0, 1.0), (1.0, 0.0), (3.0, 2.0)]).unwrap();
        assert!((tab.integral(0.5) - (1.0 + 0.5) * 0.5 / 2.0).abs() < 1e-15);
        assert!((tab.integral(1.0) - 0.5).abs() < 1e-15);
        assert!((tab.integral(3.0) - 2.5).abs() < 1e-15);
        // constant continuation after the last knot
        assert!((tab.integral(5.0) - 6.5).abs() < 1e-15);
        assert_eq!(tab.rate(10.0), 2.0);
        assert!(tab.is_exploratory());
    }

    #[test]
    fn table_validation() {
        assert!(DampingProfile::table(vec![(0.0, -1.0)]).is_err());
        assert!(DampingProfile::table(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(DampingProfile::table(vec![(0.5, 1.0)]).is_err());
        assert!(DampingProfile::table(vec![]).is_err());
        assert!(DampingProfile::constant(-0.1).is_err());
    }

    #[test]
    fn slope_extremes_builtins() {
        let c = DampingProfile::constant(0.4).unwrap().slope_extremes(10.0);
        assert_eq!((c.lower, c.upper), (0.4, 0.4));
        let z = DampingProfile::Zero.slope_extremes(10.0);
        assert_eq!((z.lower, z.upper), (0.0, 0.0));
        let l = DampingProfile::scaled_log(0.7).unwrap().slope_extremes(1e6);
        assert!(l.lower.abs() < 1e-6 && (l.upper - 0.7).abs() < 1e-6);
    }

    #[test]
    fn scaled_log_slope_is_monotone_between_its_limits() {
        // dense sampling oracle: A(t)/t strictly decreasing, bounded by (0, γ)
        let gamma = 0.7;
        let prof = DampingProfile::scaled_log(gamma).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..2000 {
            let t = 1e-6 * 10f64.powf(12.0 * i as f64 / 1999.0);
            let s = prof.integral(t) / t;
            assert!(s < prev && s > 0.0 && s <= gamma);
            prev = s;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn gauge_factor_values() {
        let c = DampingProfile::constant(0.5).unwrap();
        assert_eq!(c.gauge_factor(0.0, 3.0).unwrap(), 1.0);
        assert!((c.gauge_factor(1.0, 2.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
        let one = DampingProfile::constant(1.0).unwrap();
        assert!((one.gauge_factor(1.0, -1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert!(matches!(
            one.gauge_factor(800.0, -1.0),
            Err(Error::GaugeOverflow { .. })
        ));
    }

    #[test]
    fn serde_tagging() {
        let p: DampingProfile = toml::from_str("kind = \"constant\"\ngamma = 0.3").unwrap();
        assert_eq!(p, DampingProfile::Constant { gamma: 0.3 });
        let t: DampingProfile = toml::from_str("kind = \"table\"\nknots = [[0.0, 1.0], [2.0, 0.5]]").unwrap();
        assert_eq!(
            t,
            DampingProfile::Table {
                knots: vec![(0.0, 1.0), (2.0, 0.5)]
            }
        );
        assert!(toml::from_str::<DampingProfile>("kind = \"constant\"\ngama = 0.3").is_err());
    }

    fn any_profile() -> impl Strategy<Value = DampingProfile> {
        prop_oneof![
            Just(DampingProfile::Zero),
            (0.0f64..3.0).prop_map(|gamma| DampingProfile::Constant { gamma }),
            (0.0f64..3.0).prop_map(|gamma| DampingProfile::ScaledLog { gamma }),
            prop::collection::vec((0.01f64..2.0, 0.0f64..3.0), 1..6).prop_map(|steps| {
                let mut t = 0.0;
                let mut knots = vec![(0.0, steps[0].1)];
                for (dt, a) in steps.into_iter().skip(1) {
                    t += dt;
                    knots.push((t, a));
                }
                DampingProfile::Table { knots }
            }),
        ]
    }

    proptest! {
        #[test]
        fn slope_bounds_enclose_samples(prof in any_profile(), t_max in 0.5f64..50.0) {
            let ext = prof.slope_extremes(t_max);
            prop_assert!(ext.lower <= ext.upper);
            for i in 1..=200 {
                let t = t_max * i as f64 / 200.0;
                let s = prof.integral(t) / t;
                prop_assert!(s >= ext.lower - 1e-12 && s <= ext.upper + 1e-12);
            }
        }

        #[test]
        fn integral_nondecreasing_from_zero(prof in any_profile(), t in 0.0f64..20.0, dt in 0.0f64..5.0) {
            prop_assert_eq!(prof.integral(0.0), 0.0);
            prop_assert!(prof.integral(t + dt) >= prof.integral(t) - 1e-14);
            prop_assert!(prof.rate(t) >= 0.0);
        }

        #[test]
        fn gauge_factors_multiply(prof in any_profile(), t in 0.0f64..10.0, k1 in -2.0f64..2.0, k2 in -2.0f64..2.0) {
            let a = prof.gauge_factor(t, k1).unwrap() * prof.gauge_factor(t, k2).unwrap();
            let b = prof.gauge_factor(t, k1 + k2).unwrap();
            prop_assert!((a - b).abs() <= 1e-14 * b.max(1.0) * 10.0);
        }
    }
}
