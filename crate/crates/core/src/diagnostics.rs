//! Verdicts drawn from trajectories: conservation-law residuals, decay
//! rates, the mass-critical Gronwall bound, scattering tails, dispersive
//! exponents and parameter scans.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::damping::DampingProfile;
use crate::error::{invalid, Error, Result};
use crate::evolution::{evolve, EvolveOptions, Observables, RunVerdict, Trajectory};
use crate::functionals::{boundary_mass_fraction, lr_norm, mass, BOUNDARY_MASS_TOLERANCE};
use crate::groundstate::{resample, threshold_norms, GroundState};
use crate::operator::{ReducedField, SpectralOperator};
use crate::params::{
    a_double_star, classify_regime, intercritical_triple, kappa, mass_critical_condition_holds,
    mass_critical_decay_rate, ModelParams, Regime,
};

/// Fewest samples [`identity_suite`] accepts.
pub const MIN_IDENTITY_SAMPLES: usize = 10;

/// Maximal residuals of the four conservation laws along one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// `max |e^{2A} M(u) / M(u0) - 1|`
    pub mass_law: f64,
    /// `max |dE/dt + 2a I|`, central differences, relative to the scale
    pub energy_law: f64,
    /// `max |𝓗(u(t)) - 𝓗(u0)|` relative to the scale
    pub hamiltonian: f64,
    /// `max |H(v(t)) - E(u0) - ∫ dH/ds|` relative to the scale
    pub v_hamiltonian: f64,
    /// `‖√K_λ u0‖² + ∫|x|^{-b}|u0|^{p+1}`
    pub scale: f64,
}

/// Coefficient of `∫ a e^{2A} P ds` in `d/dt (e^{2A} E)`: `-2μ(p-1)/(p+1)`.
fn hamiltonian_coefficient(params: &ModelParams) -> f64 {
    -params.mu.sign() * 2.0 * (params.p - 1.0) / (params.p + 1.0)
}

/// Damped energy `𝓗(u(t)) = e^{2A} E(u) - c ∫_0^t a e^{2A} P(u) ds`, trapezoid in time.
pub fn hamiltonian_series(traj: &Trajectory, profile: &DampingProfile, params: &ModelParams) -> Vec<f64> {
    let c = hamiltonian_coefficient(params);
    let integrand = |s: &Observables| profile.rate(s.t) * (2.0 * s.gauge).exp() * s.potential;
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(traj.samples.len());
    for (i, s) in traj.samples.iter().enumerate() {
        if i > 0 {
            let prev = &traj.samples[i - 1];
            acc += 0.5 * (s.t - prev.t) * (integrand(prev) + integrand(s));
        }
        out.push((2.0 * s.gauge).exp() * s.energy - c * acc);
    }
    out
}

/// Residuals of the mass law, the energy law, and the `u`- and `v`-Hamiltonian laws.
pub fn identity_suite(traj: &Trajectory, profile: &DampingProfile, params: &ModelParams) -> Result<IdentityResiduals> {
    let s = &traj.samples;
    if s.len() < MIN_IDENTITY_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_IDENTITY_SAMPLES,
            got: s.len(),
        });
    }
    let first = s[0];
    let scale = first.quadform + first.potential;
    if !(scale > 0.0) {
        return Err(Error::ZeroField);
    }

    let mass_law = s
        .iter()
        .map(|o| ((2.0 * o.gauge).exp() * o.mass / first.mass - 1.0).abs())
        .fold(0.0, f64::max);

    let energy_law = s
        .windows(3)
        .map(|w| {
            let de = (w[2].energy - w[0].energy) / (w[2].t - w[0].t);
            (de + 2.0 * profile.rate(w[1].t) * w[1].action_i).abs()
        })
        .fold(0.0, f64::max)
        / scale;

    let ham = hamiltonian_series(traj, profile, params);
    let hamiltonian = ham.iter().map(|h| (h - ham[0]).abs()).fold(0.0, f64::max) / scale;

    // v-side: H(v) = ‖√K v‖² + μ (2/(p+1)) e^{-(p-1)A} ∫|x|^{-b}|v|^{p+1}
    let (p, mu) = (params.p, params.mu.sign());
    let c = hamiltonian_coefficient(params);
    let v_parts = |o: &Observables| {
        let q_v = (2.0 * o.gauge).exp() * o.quadform;
        let p_v = ((p + 1.0) * o.gauge).exp() * o.potential;
        let g = (-(p - 1.0) * o.gauge).exp();
        (q_v + mu * 2.0 / (p + 1.0) * g * p_v, profile.rate(o.t) * g * p_v)
    };
    let mut acc = 0.0;
    let mut v_hamiltonian: f64 = 0.0;
    let (_, mut prev_rhs) = v_parts(&first);
    for i in 1..s.len() {
        let (h_v, rhs) = v_parts(&s[i]);
        acc += 0.5 * (s[i].t - s[i - 1].t) * (prev_rhs + rhs);
        prev_rhs = rhs;
        v_hamiltonian = v_hamiltonian.max((h_v - first.energy - c * acc).abs());
    }

    Ok(IdentityResiduals {
        mass_law,
        energy_law,
        hamiltonian,
        v_hamiltonian: v_hamiltonian / scale,
        scale,
    })
}

/// Observed convergence order from residuals at decreasing step sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    /// Least-squares slope of `log residual` against `log dt`.
    pub order: f64,
    /// Orders between consecutive refinement levels.
    pub pairwise: Vec<f64>,
}

impl OrderEstimate {
    pub fn within(&self, target: f64, tol: f64) -> bool {
        (self.order - target).abs() <= tol
    }
}

pub fn refinement_order(dts: &[f64], residuals: &[f64]) -> Result<OrderEstimate> {
    if dts.len() != residuals.len() || dts.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: dts.len().min(residuals.len()),
        });
    }
    if let Some(i) = residuals.iter().position(|r| !(*r > 0.0)) {
        return Err(Error::NonPositiveObservable { t: dts[i] });
    }
    let x: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let y: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let (slope, _, _) = linear_regression(&x, &y);
    let pairwise = x
        .windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| (ys[1] - ys[0]) / (xs[1] - xs[0]))
        .collect();
    Ok(OrderEstimate { order: slope, pairwise })
}

/// Ordinary least squares `y ≈ slope x + intercept`; returns `(slope, intercept, R²)`.
pub fn linear_regression(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayObservable {
    /// `‖√K_λ u‖²`
    SqrtKNormSq,
    /// `‖u‖_{H¹_λ}`
    H1Norm,
    Mass,
}

impl DecayObservable {
    pub fn value(self, o: &Observables) -> f64 {
        match self {
            DecayObservable::SqrtKNormSq => o.quadform,
            DecayObservable::H1Norm => (o.mass + o.quadform).sqrt(),
            DecayObservable::Mass => o.mass,
        }
    }
}

/// Exponential (or, for [`dispersive_fit`], power-law) fit of an observable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// `-slope`: decay rate per unit time, or the negated log-log slope.
    pub rate: f64,
    pub intercept: f64,
    pub window: (f64, f64),
    pub r_squared: f64,
    pub samples: usize,
    pub predicted: Option<f64>,
    /// `rate - predicted`
    pub margin: Option<f64>,
}

impl DecayFit {
    pub fn slope(&self) -> f64 {
        -self.rate
    }

    pub fn with_prediction(mut self, predicted: f64) -> Self {
        self.predicted = Some(predicted);
        self.margin = Some(self.rate - predicted);
        self
    }
}

fn fit_log(points: &[(f64, f64)], window: (f64, f64), log_x: bool) -> Result<DecayFit> {
    let inside: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(t, _)| *t >= window.0 && *t <= window.1)
        .collect();
    if inside.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: inside.len(),
        });
    }
    if let Some(&(t, _)) = inside.iter().find(|(_, y)| !(*y > 0.0)) {
        return Err(Error::NonPositiveObservable { t });
    }
    let x: Vec<f64> = inside.iter().map(|(t, _)| if log_x { t.ln() } else { *t }).collect();
    let y: Vec<f64> = inside.iter().map(|(_, v)| v.ln()).collect();
    let (slope, intercept, r_squared) = linear_regression(&x, &y);
    Ok(DecayFit {
        rate: -slope,
        intercept,
        window,
        r_squared,
        samples: inside.len(),
        predicted: None,
        margin: None,
    })
}

/// Least-squares slope of `log observable` against `t` over `window`.
pub fn decay_fit(traj: &Trajectory, observable: DecayObservable, window: (f64, f64)) -> Result<DecayFit> {
    if !(window.0 < window.1) {
        return Err(invalid("window", format!("need t1 < t2 (got {window:?})")));
    }
    let last = traj.last().t;
    if window.0 < 0.0 || window.0 >= last {
        return Err(invalid(
            "window",
            format!("window {window:?} lies outside the trajectory [0, {last}]"),
        ));
    }
    let pts: Vec<(f64, f64)> = traj.samples.iter().map(|o| (o.t, observable.value(o))).collect();
    fit_log(&pts, window, false)
}

/// Smallness data of the mass-critical Gronwall bound, known before any run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GronwallHypothesis {
    /// `(‖u0‖/‖Q‖)^{p-1}`
    pub rho: f64,
    pub norm_u0: f64,
    /// `(N/(N+2-b))^{N/(4-2b)} ‖Q‖`
    pub threshold_norm: f64,
    pub below_threshold: bool,
    /// `(p-1)ρ/(1-ρ) < 2`
    pub condition_holds: bool,
    pub a_lower: f64,
    /// Decay rate of the bound, when the hypotheses hold.
    pub rate: Option<f64>,
}

impl GronwallHypothesis {
    pub fn met(&self) -> bool {
        self.below_threshold && self.condition_holds && self.rate.is_some()
    }
}

/// `ρ`, the threshold and the bound's rate for data of mass `mass_u0`.
pub fn gronwall_hypothesis(
    mass_u0: f64,
    gs: &GroundState,
    params: &ModelParams,
    profile: &DampingProfile,
    t_max: f64,
) -> Result<GronwallHypothesis> {
    let threshold_norm = threshold_norms(gs, params)?;
    let norm_u0 = mass_u0.sqrt();
    let p = params.p;
    let rho = (norm_u0 / gs.norm_q()).powf(p - 1.0);
    let a_lower = profile.slope_extremes(t_max).lower;
    let condition_holds = mass_critical_condition_holds(p, rho);
    let rate = if condition_holds {
        Some(mass_critical_decay_rate(p, rho, a_lower)?)
    } else {
        None
    };
    Ok(GronwallHypothesis {
        rho,
        norm_u0,
        threshold_norm,
        below_threshold: norm_u0 < threshold_norm,
        condition_holds,
        a_lower,
        rate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum GronwallOutcome {
    /// Smallness hypotheses fail; nothing is claimed about the run.
    HypothesisNotMet,
    Holds,
    Violated {
        t: f64,
        quadform: f64,
        bound: f64,
    },
}

/// Pointwise check of `‖√K_λ u(t)‖² ≤ (1 + slack) E(u0)/(1-ρ) e^{-rate t}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GronwallReport {
    pub hypothesis: GronwallHypothesis,
    pub energy_u0: f64,
    pub slack: f64,
    /// Largest `quadform / bound` seen (without slack).
    pub max_ratio: f64,
    pub samples: usize,
    pub outcome: GronwallOutcome,
}

pub const GRONWALL_SLACK: f64 = 0.05;

pub fn gronwall_bound_check(
    traj: &Trajectory,
    gs: &GroundState,
    params: &ModelParams,
    profile: &DampingProfile,
) -> Result<GronwallReport> {
    let regime = classify_regime(params);
    if regime != Regime::MassCritical {
        return Err(Error::WrongRegime {
            operation: "gronwall_bound_check",
            expected: "MassCritical",
            found: regime.to_string(),
        });
    }
    let first = traj.initial();
    let hypothesis = gronwall_hypothesis(first.mass, gs, params, profile, traj.last().t.max(1.0))?;
    let mut report = GronwallReport {
        energy_u0: first.energy,
        slack: GRONWALL_SLACK,
        max_ratio: 0.0,
        samples: traj.samples.len(),
        outcome: GronwallOutcome::HypothesisNotMet,
        hypothesis,
    };
    let Some(rate) = report.hypothesis.rate.filter(|_| report.hypothesis.met()) else {
        return Ok(report);
    };
    let prefactor = first.energy / (1.0 - report.hypothesis.rho);
    report.outcome = GronwallOutcome::Holds;
    for o in &traj.samples {
        let bound = prefactor * (-rate * o.t).exp();
        let ratio = o.quadform / bound;
        report.max_ratio = report.max_ratio.max(ratio);
        if ratio > 1.0 + GRONWALL_SLACK && report.outcome == GronwallOutcome::Holds {
            report.outcome = GronwallOutcome::Violated {
                t: o.t,
                quadform: o.quadform,
                bound,
            };
        }
    }
    Ok(report)
}

/// Default Cauchy tolerance of [`scattering_detector`], relative to `‖u0‖_{H¹_λ}`.
pub const SCATTERING_TOLERANCE: f64 = 1e-4;

/// Pulled-back tail `s(t_i) = ‖U(-t_i) v_i - U(-t_last) v_last‖_{H¹_λ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringReport {
    pub times: Vec<f64>,
    pub tail: Vec<f64>,
    pub h1_initial: f64,
    pub tolerance: f64,
    pub monotone: bool,
    pub scatters: bool,
}

pub fn scattering_detector(snapshots: &[ReducedField], op: &SpectralOperator) -> Result<ScatteringReport> {
    scattering_detector_with(snapshots, op, SCATTERING_TOLERANCE)
}

pub fn scattering_detector_with(
    snapshots: &[ReducedField],
    op: &SpectralOperator,
    relative_tolerance: f64,
) -> Result<ScatteringReport> {
    if snapshots.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: snapshots.len(),
        });
    }
    if snapshots.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(invalid("snapshots", "times must increase strictly"));
    }
    for s in snapshots {
        op.radial.check(s)?;
    }
    let pulled: Vec<Vec<Complex64>> = snapshots
        .iter()
        .map(|s| {
            let mut c = op.to_spectral(&s.w);
            op.rotate_spectral(&mut c, -s.t);
            c
        })
        .collect();
    let last = pulled.last().expect("at least three snapshots");
    let tail: Vec<f64> = pulled
        .iter()
        .map(|c| {
            let diff: Vec<Complex64> = c.iter().zip(last).map(|(a, b)| a - b).collect();
            op.spectral_h1_sq(&diff).sqrt()
        })
        .collect();
    let h1_initial = op.spectral_h1_sq(&pulled[0]).sqrt();
    let tolerance = relative_tolerance * h1_initial;
    let roundoff = 1e-12 * h1_initial;
    let monotone = tail.windows(2).all(|w| w[1] <= w[0] + roundoff);
    let scatters = monotone && tail[tail.len() - 2] < tolerance;
    Ok(ScatteringReport {
        times: snapshots.iter().map(|s| s.t).collect(),
        tail,
        h1_initial,
        tolerance,
        monotone,
        scatters,
    })
}

/// Largest admissible `r` in the dispersive estimate: `N/κ₊` (infinite when `κ ≤ 0`).
pub fn dispersive_r_cap(dim: usize, lambda: f64) -> Result<f64> {
    let k = kappa(dim, lambda)?.max(0.0);
    Ok(if k == 0.0 { f64::INFINITY } else { dim as f64 / k })
}

/// Samples per window in [`dispersive_fit`].
pub const DISPERSIVE_SAMPLES: usize = 48;

/// Log-log slope of `‖U_λ(t) φ‖_{L^r}` over `window`; `rate` is the negated
/// slope and the prediction is `N(1/2 - 1/r)`. Times at which the boundary
/// collar holds more than the tolerated mass are left out.
pub fn dispersive_fit(op: &SpectralOperator, phi: &ReducedField, r: f64, window: (f64, f64)) -> Result<DecayFit> {
    let dim = op.dim();
    let cap = dispersive_r_cap(dim, op.lambda())?;
    if !(r >= 2.0 && (r < cap || (op.lambda() == 0.0 && r <= cap))) {
        return Err(invalid(
            "r",
            format!("the dispersive estimate needs 2 <= r < N/kappa_+ = {cap} (got {r})"),
        ));
    }
    if !(window.0 > 0.0 && window.0 < window.1) {
        return Err(invalid("window", format!("need 0 < t1 < t2 (got {window:?})")));
    }
    op.radial.check(phi)?;
    if phi.is_zero() {
        return Err(Error::ZeroField);
    }
    let c0 = op.to_spectral(&phi.w);
    let (l0, l1) = (window.0.ln(), window.1.ln());
    let mut pts = Vec::with_capacity(DISPERSIVE_SAMPLES);
    for i in 0..DISPERSIVE_SAMPLES {
        let t = (l0 + (l1 - l0) * i as f64 / (DISPERSIVE_SAMPLES - 1) as f64).exp();
        let mut c = c0.clone();
        op.rotate_spectral(&mut c, t);
        let f = ReducedField {
            grid: phi.grid,
            dim,
            w: op.from_spectral(&c),
            t,
        };
        if boundary_mass_fraction(&f) > BOUNDARY_MASS_TOLERANCE {
            continue;
        }
        pts.push((t, lr_norm(&f, r)));
    }
    let n = dim as f64;
    Ok(fit_log(&pts, window, true)?.with_prediction(n * (0.5 - 1.0 / r)))
}

/// Qualitative fate of one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Scatters,
    Bounded,
    BlowUp,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Scatters => "scatters",
            Outcome::Bounded => "bounded",
            Outcome::BlowUp => "blow-up",
        })
    }
}

/// Time stepping shared by every run of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub t_final: f64,
    pub dt: f64,
    pub snapshot_stride: usize,
    pub sample_stride: usize,
}

/// Verdict of one run plus its tail profile and observed decay of `‖√K_λ u‖²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub outcome: Outcome,
    pub blowup_time: Option<f64>,
    pub scattering: Option<ScatteringReport>,
    pub boundary_flag: bool,
    pub final_quadform: f64,
}

/// Classifies a finished trajectory.
pub fn classify_run(traj: &Trajectory, op: &SpectralOperator) -> Result<RunSummary> {
    let final_quadform = traj.last().quadform;
    if let RunVerdict::BlowUp { t, .. } = traj.verdict {
        return Ok(RunSummary {
            outcome: Outcome::BlowUp,
            blowup_time: Some(t),
            scattering: None,
            boundary_flag: traj.boundary_flag(),
            final_quadform,
        });
    }
    let report = scattering_detector(&traj.snapshots, op)?;
    Ok(RunSummary {
        outcome: if report.scatters {
            Outcome::Scatters
        } else {
            Outcome::Bounded
        },
        blowup_time: None,
        scattering: Some(report),
        boundary_flag: traj.boundary_flag(),
        final_quadform,
    })
}

fn run_one(
    u0: &ReducedField,
    profile: &DampingProfile,
    params: &ModelParams,
    op: &SpectralOperator,
    settings: &RunSettings,
) -> Result<RunSummary> {
    let options = EvolveOptions::default()
        .sample_every(settings.sample_stride)
        .snapshots_every(settings.snapshot_stride);
    let traj = evolve(u0, settings.t_final, settings.dt, profile, params, op, &options)?;
    classify_run(&traj, op)
}

/// One row of [`threshold_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    /// `‖u0‖` as a multiple of the threshold norm.
    pub scale: f64,
    pub norm_u0: f64,
    pub below_threshold: bool,
    pub summary: RunSummary,
}

/// Runs `u0 = scale · threshold · Q/‖Q‖` for each scale (in parallel, rows in input order).
pub fn threshold_scan(
    params: &ModelParams,
    gs: &GroundState,
    profile: &DampingProfile,
    op: &SpectralOperator,
    scales: &[f64],
    settings: &RunSettings,
) -> Result<Vec<ThresholdRow>> {
    if scales.is_empty() {
        return Err(Error::EmptyScan);
    }
    let threshold = threshold_norms(gs, params)?;
    let q = resample(gs.profile(), op.grid());
    let unit = q.scaled(1.0 / mass(&q).sqrt());
    scales
        .par_iter()
        .map(|&scale| {
            let norm_u0 = scale * threshold;
            let u0 = unit.scaled(norm_u0);
            Ok(ThresholdRow {
                scale,
                norm_u0,
                below_threshold: norm_u0 < threshold,
                summary: run_one(&u0, profile, params, op, settings)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DampingRow {
    pub gamma: f64,
    pub summary: RunSummary,
}

/// Empirical smallest scattering damping against the theory's scalings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AStarReport {
    pub rows: Vec<DampingRow>,
    /// Smallest grid value whose run scatters, if any.
    pub empirical: Option<f64>,
    pub u0_h1: f64,
    /// `‖u0‖_{H¹}^θ`, the growth law of `a*` (intercritical only).
    pub heuristic_scale: Option<f64>,
    /// `a**` with `c0 = 1` (energy-critical only).
    pub a_double_star: Option<f64>,
}

/// Scans constant damping `γ ∈ a_grid` (ascending) in parallel.
pub fn a_star_search(
    params: &ModelParams,
    u0: &ReducedField,
    op: &SpectralOperator,
    a_grid: &[f64],
    settings: &RunSettings,
) -> Result<AStarReport> {
    if a_grid.is_empty() {
        return Err(Error::EmptyScan);
    }
    if a_grid.iter().any(|g| !(*g > 0.0)) || a_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid(
            "a_grid",
            "damping values must be positive and strictly ascending",
        ));
    }
    let regime = classify_regime(params);
    if !matches!(regime, Regime::Intercritical | Regime::EnergyCritical) {
        return Err(Error::WrongRegime {
            operation: "a_star_search",
            expected: "Intercritical or EnergyCritical",
            found: regime.to_string(),
        });
    }
    let u0_h1 = op.spectral_h1_sq(&op.to_spectral(&u0.w)).sqrt();
    let rows: Vec<DampingRow> = a_grid
        .par_iter()
        .map(|&gamma| {
            let profile = DampingProfile::constant(gamma)?;
            Ok(DampingRow {
                gamma,
                summary: run_one(u0, &profile, params, op, settings)?,
            })
        })
        .collect::<Result<_>>()?;
    let empirical = rows
        .iter()
        .find(|r| r.summary.outcome == Outcome::Scatters)
        .map(|r| r.gamma);
    let heuristic_scale = match regime {
        Regime::Intercritical => intercritical_triple(params).ok().map(|t| u0_h1.powf(t.theta)),
        _ => None,
    };
    let a_double_star = (regime == Regime::EnergyCritical).then(|| a_double_star(params.p, 1.0, u0_h1));
    Ok(AStarReport {
        rows,
        empirical,
        u0_h1,
        heuristic_scale,
        a_double_star,
    })
}
