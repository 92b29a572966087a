//! Model constants, derived exponents, regime classification and the
//! closed-form thresholds of the damped inhomogeneous NLS
//!
//! ```text
//! i u_t - K_λ u + i a(t) u = μ |x|^{-b} |u|^{p-1} u,   K_λ = -Δ + λ |x|^{-2}
//! ```
//!
//! Everything here is a pure function of a handful of reals.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Absolute tolerance for equality tests on derived exponents.
pub const EQ_TOL: f64 = 1e-12;

/// Sign of the nonlinearity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Nonlinearity {
    /// μ = -1
    Focusing,
    /// μ = +1
    Defocusing,
}

impl Nonlinearity {
    pub fn sign(self) -> f64 {
        match self {
            Nonlinearity::Focusing => -1.0,
            Nonlinearity::Defocusing => 1.0,
        }
    }
}

impl TryFrom<i8> for Nonlinearity {
    type Error = String;

    fn try_from(value: i8) -> std::result::Result<Self, Self::Error> {
        match value {
            -1 => Ok(Nonlinearity::Focusing),
            1 => Ok(Nonlinearity::Defocusing),
            other => Err(format!("mu must be -1 or +1, got {other}")),
        }
    }
}

impl From<Nonlinearity> for i8 {
    fn from(value: Nonlinearity) -> Self {
        match value {
            Nonlinearity::Focusing => -1,
            Nonlinearity::Defocusing => 1,
        }
    }
}

/// The tuple (N, b, p, λ, μ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub dim: usize,
    pub b: f64,
    pub p: f64,
    pub lambda: f64,
    pub mu: Nonlinearity,
}

/// Scaling regime of the nonlinearity, ordered by the critical Sobolev index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    MassSubcritical,
    MassCritical,
    Intercritical,
    EnergyCritical,
    Supercritical,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedExponents {
    pub lambda_n: f64,
    pub kappa: f64,
    pub sc: f64,
    pub nu: f64,
    pub regime: Regime,
}

impl ModelParams {
    /// Validated constructor.
    pub fn new(dim: usize, b: f64, p: f64, lambda: f64, mu: Nonlinearity) -> Result<Self> {
        let params = ModelParams { dim, b, p, lambda, mu };
        params.validate()?;
        Ok(params)
    }

    pub fn focusing(dim: usize, b: f64, p: f64, lambda: f64) -> Result<Self> {
        Self::new(dim, b, p, lambda, Nonlinearity::Focusing)
    }

    /// Every violated invariant, as `(field, reason)`.
    pub fn issues(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if self.dim < 3 {
            out.push(("N", format!("dimension must satisfy N >= 3 (got {})", self.dim)));
        }
        if !(self.b.is_finite() && (0.0..2.0).contains(&self.b)) {
            out.push((
                "b",
                format!("must satisfy 0 <= b < 2, i.e. 0<b<2 or b=0 (got {})", self.b),
            ));
        }
        if !(self.p.is_finite() && self.p > 1.0) {
            out.push(("p", format!("must satisfy p > 1 (got {})", self.p)));
        }
        if self.dim >= 3 {
            let ln = lambda_n_unchecked(self.dim);
            if !(self.lambda.is_finite() && self.lambda > -ln) {
                out.push((
                    "lambda",
                    format!(
                        "must satisfy lambda > -(N-2)^2/4 = {} strictly (got {})",
                        -ln, self.lambda
                    ),
                ));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.issues().into_iter().next() {
            None => Ok(()),
            Some((field, reason)) => Err(invalid(field, reason)),
        }
    }

    pub fn derived(&self) -> DerivedExponents {
        DerivedExponents {
            lambda_n: lambda_n_unchecked(self.dim),
            kappa: kappa_unchecked(self.dim, self.lambda),
            sc: critical_sobolev(self),
            nu: nu_unchecked(self),
            regime: classify_regime(self),
        }
    }

    /// Weight exponent of the nonlinearity in reduced radial coordinates
    /// `w = r^{(N-1)/2} u`: `|x|^{-b}|u|^{p+1} r^{N-1} = r^{-e} |w|^{p+1}`.
    pub fn reduced_weight_exponent(&self) -> f64 {
        self.b + (self.dim as f64 - 1.0) * (self.p - 1.0) / 2.0
    }
}

/// `p = 1 + (4 - 2b)/N`.
pub fn mass_critical_p(dim: usize, b: f64) -> f64 {
    1.0 + (4.0 - 2.0 * b) / dim as f64
}

/// `p = 1 + (4 - 2b)/(N - 2) = (N + 2 - 2b)/(N - 2)`.
pub fn energy_critical_p(dim: usize, b: f64) -> f64 {
    1.0 + (4.0 - 2.0 * b) / (dim as f64 - 2.0)
}

fn lambda_n_unchecked(dim: usize) -> f64 {
    let n = dim as f64;
    (n - 2.0) * (n - 2.0) / 4.0
}

/// Sharp Hardy constant `(N-2)^2/4`.
pub fn lambda_n(dim: usize) -> Result<f64> {
    if dim < 3 {
        return Err(invalid("N", format!("dimension must satisfy N >= 3 (got {dim})")));
    }
    Ok(lambda_n_unchecked(dim))
}

fn kappa_unchecked(dim: usize, lambda: f64) -> f64 {
    let ln = lambda_n_unchecked(dim);
    ln.sqrt() - (ln + lambda).max(0.0).sqrt()
}

/// `κ = sqrt(λ_N) - sqrt(λ_N + λ)`.
pub fn kappa(dim: usize, lambda: f64) -> Result<f64> {
    let ln = lambda_n(dim)?;
    if !(lambda >= -ln) {
        return Err(invalid(
            "lambda",
            format!("kappa needs lambda >= -lambda_N = {} (got {lambda})", -ln),
        ));
    }
    Ok(kappa_unchecked(dim, lambda))
}

/// `s_c = N/2 - (2 - b)/(p - 1)`.
pub fn critical_sobolev(params: &ModelParams) -> f64 {
    params.dim as f64 / 2.0 - (2.0 - params.b) / (params.p - 1.0)
}

pub fn classify_regime(params: &ModelParams) -> Regime {
    let sc = critical_sobolev(params);
    if (sc - 0.0).abs() <= EQ_TOL {
        Regime::MassCritical
    } else if (sc - 1.0).abs() <= EQ_TOL {
        Regime::EnergyCritical
    } else if sc < 0.0 {
        Regime::MassSubcritical
    } else if sc < 1.0 {
        Regime::Intercritical
    } else {
        Regime::Supercritical
    }
}

fn nu_unchecked(params: &ModelParams) -> f64 {
    params.dim as f64 * (params.p - 1.0) / 2.0 + params.b
}

/// Upper end of the Gagliardo-Nirenberg range, `1 + 2(2-b)/(N-2)`.
pub fn gn_upper_p(dim: usize, b: f64) -> f64 {
    1.0 + 2.0 * (2.0 - b) / (dim as f64 - 2.0)
}

/// Gagliardo-Nirenberg exponent `ν = N(p-1)/2 + b`.
///
/// Only defined for `1 < p < 1 + 2(2-b)/(N-2)`, where the sharp constant exists.
pub fn gn_exponent_nu(params: &ModelParams) -> Result<f64> {
    let upper = gn_upper_p(params.dim, params.b);
    if !(params.p > 1.0 && params.p < upper) {
        return Err(invalid(
            "p",
            format!(
                "Gagliardo-Nirenberg inequality needs 1 < p < 1 + 2(2-b)/(N-2) = {upper} (got {})",
                params.p
            ),
        ));
    }
    Ok(nu_unchecked(params))
}

/// Admissible Strichartz pair: `2/q = N(1/2 - 1/r)`, `2 <= r <= 2N/(N-2)`.
/// `q = f64::INFINITY` is allowed.
pub fn is_admissible(dim: usize, q: f64, r: f64) -> bool {
    if dim < 3 || !(q > 0.0) || !(r > 0.0) {
        return false;
    }
    let n = dim as f64;
    let r_max = 2.0 * n / (n - 2.0);
    if r < 2.0 - EQ_TOL || r > r_max + EQ_TOL {
        return false;
    }
    (2.0 / q - n * (0.5 - 1.0 / r)).abs() <= EQ_TOL
}

/// s-admissible pair: `2/q = N(1/2 - 1/r) - s` with `2N/(N-2s) < r < 2N/(N-2)`.
pub fn is_s_admissible(dim: usize, s: f64, q: f64, r: f64) -> bool {
    if dim < 3 || !(s > 0.0) || !(q > 0.0) || !(r > 0.0) {
        return false;
    }
    let n = dim as f64;
    let r_max = 2.0 * n / (n - 2.0);
    let r_min = if 2.0 * s < n {
        2.0 * n / (n - 2.0 * s)
    } else {
        f64::INFINITY
    };
    if !(r > r_min && r < r_max) {
        return false;
    }
    (2.0 / q - (n * (0.5 - 1.0 / r) - s)).abs() <= EQ_TOL
}

/// The Strichartz/Hölder triple used in the intercritical argument.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzTriple {
    pub theta: f64,
    pub r: f64,
    pub q: f64,
}

impl StrichartzTriple {
    /// `θ̃` from `1/θ + 1/θ̃ = N(1/2 - 1/r)`.
    pub fn theta_tilde(&self, dim: usize) -> f64 {
        1.0 / (dim as f64 * (0.5 - 1.0 / self.r) - 1.0 / self.theta)
    }

    /// Residual of the exponent bookkeeping `p θ̃' = θ`.
    ///
    /// Hölder on `|u|^{p-1} u` in `L^θ` puts `p` factors into `L^{θ̃'}`,
    /// so the multiplier is `p`; `(p+1) θ̃' = θ` does not hold.
    pub fn theta_identity_residual(&self, dim: usize, p: f64) -> f64 {
        let tt = self.theta_tilde(dim);
        let tt_conj = tt / (tt - 1.0);
        (p * tt_conj - self.theta).abs() / self.theta
    }

    /// Residual of `1/q' = 1/q + (p-1)/θ`.
    pub fn q_identity_residual(&self, p: f64) -> f64 {
        ((1.0 - 1.0 / self.q) - (1.0 / self.q + (p - 1.0) / self.theta)).abs()
    }
}

/// `(θ, r, q)` for the intercritical regime with `0 < b < 2`.
pub fn intercritical_triple(params: &ModelParams) -> Result<StrichartzTriple> {
    let regime = classify_regime(params);
    if regime != Regime::Intercritical {
        return Err(Error::WrongRegime {
            operation: "intercritical_triple",
            expected: "Intercritical",
            found: regime.to_string(),
        });
    }
    if !(params.b > 0.0 && params.b < 2.0) {
        return Err(invalid("b", format!("triple needs 0 < b < 2 (got {})", params.b)));
    }
    let n = params.dim as f64;
    let (b, p) = (params.b, params.p);
    let theta = 2.0 * (p + 1.0) * (p - 1.0) / (4.0 - 2.0 * b - (n - 2.0) * (p - 1.0));
    let r = (p + 1.0) / (1.0 - b / n);
    let q = 4.0 * (1.0 + p) / (2.0 * b + n * (p - 1.0));
    Ok(StrichartzTriple { theta, r, q })
}

/// Default small parameter for [`qr_star`].
pub fn default_eta(p: f64) -> f64 {
    0.05 * (p - 1.0)
}

/// The admissible pair `(q_*, r_*)` of the small-data argument.
pub fn qr_star(params: &ModelParams, eta: f64) -> Result<(f64, f64)> {
    let regime = classify_regime(params);
    if regime != Regime::Intercritical {
        return Err(Error::WrongRegime {
            operation: "qr_star",
            expected: "Intercritical",
            found: regime.to_string(),
        });
    }
    let (n, b, p) = (params.dim as f64, params.b, params.p);
    if !(eta > 0.0 && eta < p - 1.0) {
        return Err(invalid(
            "eta",
            format!("must lie in (0, p-1) = (0, {}) (got {eta})", p - 1.0),
        ));
    }
    let pm = p - 1.0;
    let big = n * (p + 1.0) + 2.0 * b - 2.0 * n;
    let q_star = 4.0 * pm * (p + 1.0 - eta) / (pm * big - eta * (big - 4.0));
    let r_star = n * pm * (p + 1.0 - eta) / (pm * (n - b) - eta * (2.0 - b));
    if !is_admissible(params.dim, q_star, r_star) {
        return Err(invalid(
            "eta",
            format!("(q*, r*) = ({q_star}, {r_star}) is not admissible for eta = {eta}"),
        ));
    }
    Ok((q_star, r_star))
}

/// `(N/(N+2-b))^{N/(4-2b)}`, the fraction of `‖Q‖` below which mass-critical
/// data scatters under positive damping.
pub fn mass_critical_threshold_factor(dim: usize, b: f64) -> f64 {
    let n = dim as f64;
    (n / (n + 2.0 - b)).powf(n / (4.0 - 2.0 * b))
}

/// Energy-critical damping size `a** = [ln((2c0)^{-p} ‖u0‖_{H^1}^{1-p})]_- / (1-p)`.
///
/// `c0` is the (unknown) sharp Strichartz constant; callers supply it.
pub fn a_double_star(p: f64, c0: f64, u0_h1: f64) -> f64 {
    let log_arg = -p * (2.0 * c0).ln() + (1.0 - p) * u0_h1.ln();
    log_arg.min(0.0) / (1.0 - p)
}

/// `(p-1)ρ/(1-ρ) < 2`, the smallness condition of the mass-critical Gronwall bound.
pub fn mass_critical_condition_holds(p: f64, rho: f64) -> bool {
    (0.0..1.0).contains(&rho) && (p - 1.0) * rho / (1.0 - rho) < 2.0 - EQ_TOL
}

/// Decay rate `(2 - (p-1)ρ/(1-ρ)) a_lower` of `‖√K_λ u(t)‖²` in the
/// mass-critical case.
pub fn mass_critical_decay_rate(p: f64, rho: f64, a_lower: f64) -> Result<f64> {
    if !mass_critical_condition_holds(p, rho) {
        return Err(invalid(
            "rho",
            format!("(p-1)rho/(1-rho) < 2 with 0 <= rho < 1 fails for p = {p}, rho = {rho}"),
        ));
    }
    Ok((2.0 - (p - 1.0) * rho / (1.0 - rho)) * a_lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hardy_constant_values() {
        assert_eq!(lambda_n(3).unwrap(), 0.25);
        assert_eq!(lambda_n(4).unwrap(), 1.0);
        assert_eq!(lambda_n(6).unwrap(), 4.0);
        assert!(lambda_n(2).is_err());
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(3, 0.0).unwrap(), 0.0);
        assert!(close(kappa(3, -0.25).unwrap(), 0.5, 1e-15));
        assert!(close(kappa(3, 2.0).unwrap(), -1.0, 1e-15));
        assert!(kappa(3, -0.3).is_err());
    }

    #[test]
    fn critical_exponent_values() {
        let m = |n, b, p| ModelParams::focusing(n, b, p, 0.0).unwrap();
        assert!(close(critical_sobolev(&m(3, 0.5, 2.0)), 0.0, 1e-15));
        assert!(close(critical_sobolev(&m(3, 0.5, 4.0)), 1.0, 1e-15));
        assert!(close(critical_sobolev(&m(4, 1.0, 2.0)), 1.0, 1e-15));
    }

    #[test]
    fn regimes() {
        let m = |p| ModelParams::focusing(3, 0.5, p, 0.0).unwrap();
        assert_eq!(classify_regime(&m(3.0)), Regime::Intercritical);
        assert_eq!(classify_regime(&m(2.0)), Regime::MassCritical);
        assert_eq!(classify_regime(&m(1.5)), Regime::MassSubcritical);
        assert_eq!(classify_regime(&m(4.0)), Regime::EnergyCritical);
        assert_eq!(classify_regime(&m(5.0)), Regime::Supercritical);
    }

    #[test]
    fn nu_values() {
        let nu = |n, b, p| gn_exponent_nu(&ModelParams::focusing(n, b, p, 0.0).unwrap()).unwrap();
        assert!(close(nu(3, 0.5, 3.0), 3.5, 1e-15));
        assert!(close(nu(3, 0.5, 2.0), 2.0, 1e-15));
        assert!(close(nu(4, 0.0, 2.0), 2.0, 1e-15));
        let out_of_range = ModelParams::focusing(3, 0.5, 4.0, 0.0).unwrap();
        assert!(gn_exponent_nu(&out_of_range).is_err());
    }

    #[test]
    fn admissible_pairs() {
        assert!(is_admissible(3, f64::INFINITY, 2.0));
        assert!(is_admissible(3, 2.0, 6.0));
        // 2/4 = 0.5 but 3 (1/2 - 1/4) = 0.75
        assert!(!is_admissible(3, 4.0, 4.0));
        assert!(!is_admissible(3, 1.0, 7.0));
    }

    #[test]
    fn triple_for_cubic_case() {
        let params = ModelParams::focusing(3, 0.5, 3.0, 0.0).unwrap();
        let t = intercritical_triple(&params).unwrap();
        assert!(close(t.r, 4.8, 1e-12));
        assert!(close(t.q, 16.0 / 7.0, 1e-12));
        assert!(close(t.theta, 16.0, 1e-12));
        assert!(is_admissible(3, t.q, t.r));
        let sc = critical_sobolev(&params);
        assert!(is_s_admissible(3, sc, t.theta, t.r));
        assert!(t.theta_identity_residual(3, params.p) < 1e-12);
        assert!(t.q_identity_residual(params.p) < 1e-12);
        assert!(t.theta > 1.0_f64.max(params.p - 1.0));
    }

    #[test]
    fn triple_rejects_other_regimes() {
        let params = ModelParams::focusing(3, 0.5, 2.0, 0.0).unwrap();
        assert!(matches!(intercritical_triple(&params), Err(Error::WrongRegime { .. })));
    }

    #[test]
    fn qr_star_limits() {
        let params = ModelParams::focusing(3, 0.5, 3.0, 0.0).unwrap();
        let (q, r) = qr_star(&params, 0.1).unwrap();
        assert!(is_admissible(3, q, r));
        let (_, r0) = qr_star(&params, 1e-9).unwrap();
        assert!(close(r0, 4.8, 1e-6));
        assert!(qr_star(&params, 0.0).is_err());
        assert!(qr_star(&params, 2.0).is_err());
    }

    #[test]
    fn threshold_factor_values() {
        assert!(close(mass_critical_threshold_factor(3, 0.5), 2.0 / 3.0, 1e-15));
        assert!(close(mass_critical_threshold_factor(4, 1.0), 0.64, 1e-15));
        assert!(close(mass_critical_threshold_factor(3, 0.0), 0.6f64.powf(0.75), 1e-15));
    }

    #[test]
    fn a_double_star_values() {
        assert!(close(a_double_star(5.0, 1.0, 1.0), 1.25 * 2f64.ln(), 1e-12));
        assert!(close(a_double_star(4.0, 0.5, 2.0), 8f64.ln() / 3.0, 1e-12));
        // (2 c0)^{-p} u0^{1-p} >= 1: the negative part vanishes
        assert_eq!(a_double_star(3.0, 0.1, 0.5), 0.0);
    }

    #[test]
    fn decay_rate_values() {
        assert!(close(
            mass_critical_decay_rate(2.0, 1.0 / 3.0, 0.2).unwrap(),
            0.3,
            1e-15
        ));
        assert!(close(mass_critical_decay_rate(2.0, 0.0, 0.7).unwrap(), 1.4, 1e-15));
        assert!(mass_critical_decay_rate(2.0, 2.0 / 3.0, 0.2).is_err());
        assert!(mass_critical_decay_rate(2.0, 1.0, 0.2).is_err());
    }

    #[test]
    fn validation_messages_name_the_field() {
        let bad_b = ModelParams::focusing(3, 2.5, 2.0, 0.0).unwrap_err();
        assert!(bad_b.to_string().contains("`b`"));
        assert!(bad_b.to_string().contains("0<b<2"));
        let at_threshold = ModelParams::focusing(3, 0.5, 2.0, -0.25).unwrap_err();
        assert!(at_threshold.to_string().contains("lambda"));
    }

    proptest! {
        #[test]
        fn mass_critical_p_gives_nu_two_and_sc_zero(dim in 3usize..9, b in 0.0f64..1.99) {
            let p = mass_critical_p(dim, b);
            let params = ModelParams::focusing(dim, b, p, 0.0).unwrap();
            prop_assert!(critical_sobolev(&params).abs() <= EQ_TOL);
            prop_assert!((gn_exponent_nu(&params).unwrap() - 2.0).abs() <= EQ_TOL);
            prop_assert_eq!(classify_regime(&params), Regime::MassCritical);
            let n = dim as f64;
            let factor = mass_critical_threshold_factor(dim, b).powf(p - 1.0);
            prop_assert!((factor - n / (n + 2.0 - b)).abs() <= 1e-12);
            // the Grd-ass threshold and the Gronwall smallness condition coincide
            let rho_edge = n / (n + 2.0 - b);
            prop_assert!(mass_critical_condition_holds(p, rho_edge * (1.0 - 1e-9)));
            prop_assert!(!mass_critical_condition_holds(p, rho_edge * (1.0 + 1e-9)));
        }

        #[test]
        fn energy_critical_p_gives_sc_one(dim in 3usize..9, b in 0.0f64..1.99) {
            let p = energy_critical_p(dim, b);
            let n = dim as f64;
            prop_assert!((p - (n + 2.0 - 2.0 * b) / (n - 2.0)).abs() <= 1e-12);
            let params = ModelParams::focusing(dim, b, p, 0.0).unwrap();
            prop_assert!((critical_sobolev(&params) - 1.0).abs() <= EQ_TOL);
            prop_assert_eq!(classify_regime(&params), Regime::EnergyCritical);
        }

        #[test]
        fn triple_bookkeeping(dim in 3usize..7, b in 0.01f64..1.99, frac in 0.02f64..0.98) {
            let lo = mass_critical_p(dim, b);
            let hi = energy_critical_p(dim, b);
            let p = lo + frac * (hi - lo);
            let params = ModelParams::focusing(dim, b, p, 0.0).unwrap();
            let t = intercritical_triple(&params).unwrap();
            prop_assert!(is_admissible(dim, t.q, t.r));
            prop_assert!(is_s_admissible(dim, critical_sobolev(&params), t.theta, t.r));
            prop_assert!(t.theta_identity_residual(dim, p) < 1e-12);
            prop_assert!(t.q_identity_residual(p) < 1e-12);
            let eta = default_eta(p);
            let (qs, rs) = qr_star(&params, eta).unwrap();
            prop_assert!(is_admissible(dim, qs, rs));
        }

        #[test]
        fn kappa_decreasing(dim in 3usize..9, l1 in -0.2f64..10.0, dl in 1e-3f64..5.0) {
            let k1 = kappa(dim, l1).unwrap();
            let k2 = kappa(dim, l1 + dl).unwrap();
            prop_assert!(k2 < k1);
            prop_assert!(k1 <= lambda_n(dim).unwrap().sqrt());
            prop_assert_eq!(kappa(dim, 0.0).unwrap(), 0.0);
        }
    }
}
