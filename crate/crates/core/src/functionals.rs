//! Mass, quadratic form, potential term and the energies built from them.
//!
//! All integrals are midpoint sums `ω_N h Σ_j (...)` over the cell-centred
//! grid, expressed through the reduced samples `w_j`.

use crate::error::{Error, Result};
use crate::operator::{sphere_area, RadialOperator, ReducedField, SpectralOperator};
use crate::params::ModelParams;

/// Fraction of the grid (by radius) treated as the absorbing collar.
pub const BOUNDARY_COLLAR: f64 = 0.1;
/// Mass fraction in the collar above which a run is flagged.
pub const BOUNDARY_MASS_TOLERANCE: f64 = 1e-6;

/// `M(f) = ‖f‖²_{L²}`.
pub fn mass(f: &ReducedField) -> f64 {
    f.quadrature_weight() * f.w.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

pub fn quadratic_form(op: &SpectralOperator, f: &ReducedField) -> Result<f64> {
    op.quadratic_form(f)
}

/// `‖f‖²_{H¹_λ} = ‖f‖² + ‖√K_λ f‖²`, returned as the norm.
pub fn h1_lambda_norm(op: &SpectralOperator, f: &ReducedField) -> Result<f64> {
    Ok((mass(f) + op.quadratic_form(f)?).sqrt())
}

/// `∫ |x|^{-b} |f|^{p+1} dx`.
pub fn potential_term(f: &ReducedField, b: f64, p: f64) -> f64 {
    let e = b + (f.dim as f64 - 1.0) * (p - 1.0) / 2.0;
    let grid = f.grid;
    f.quadrature_weight()
        * f.w
            .iter()
            .enumerate()
            .map(|(j, z)| grid.node(j).powf(-e) * z.norm().powf(p + 1.0))
            .sum::<f64>()
}

/// The three ingredients of every energy-type functional.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Functionals {
    pub mass: f64,
    pub quadratic_form: f64,
    pub potential: f64,
}

impl Functionals {
    pub fn of(op: &RadialOperator, f: &ReducedField, params: &ModelParams) -> Result<Self> {
        Ok(Functionals {
            mass: mass(f),
            quadratic_form: op.quadratic_form(f)?,
            potential: potential_term(f, params.b, params.p),
        })
    }

    /// `E = ‖√K_λ f‖² + μ (2/(p+1)) P`.
    pub fn energy(&self, params: &ModelParams) -> f64 {
        self.quadratic_form + params.mu.sign() * 2.0 / (params.p + 1.0) * self.potential
    }

    /// `I = ‖√K_λ f‖² + μ P`.
    pub fn action_i(&self, params: &ModelParams) -> f64 {
        self.quadratic_form + params.mu.sign() * self.potential
    }
}

pub fn energy(op: &SpectralOperator, f: &ReducedField, params: &ModelParams) -> Result<f64> {
    Ok(Functionals::of(&op.radial, f, params)?.energy(params))
}

pub fn action_i(op: &SpectralOperator, f: &ReducedField, params: &ModelParams) -> Result<f64> {
    Ok(Functionals::of(&op.radial, f, params)?.action_i(params))
}

/// `‖∇f‖² / ∫ |x|^{-2} |f|²`, using an operator built with `λ = 0`.
pub fn hardy_ratio(op_zero_lambda: &RadialOperator, f: &ReducedField) -> Result<f64> {
    op_zero_lambda.check(f)?;
    if op_zero_lambda.lambda != 0.0 {
        return Err(crate::error::invalid(
            "lambda",
            "hardy_ratio needs an operator built with lambda = 0",
        ));
    }
    let grid = f.grid;
    let weighted: f64 =
        f.w.iter()
            .enumerate()
            .map(|(j, z)| z.norm_sqr() / grid.node(j).powi(2))
            .sum::<f64>()
            * f.quadrature_weight();
    if weighted == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(op_zero_lambda.quadratic_form(f)? / weighted)
}

/// `‖f‖_{L^r}`.
pub fn lr_norm(f: &ReducedField, r: f64) -> f64 {
    let n1 = f.dim as f64 - 1.0;
    let grid = f.grid;
    let s: f64 = f
        .u_values()
        .iter()
        .enumerate()
        .map(|(j, u)| grid.node(j).powf(n1) * u.norm().powf(r))
        .sum();
    (sphere_area(f.dim) * grid.spacing() * s).powf(1.0 / r)
}

/// Share of the mass sitting in the outer collar of the grid.
pub fn boundary_mass_fraction(f: &ReducedField) -> f64 {
    let total = mass(f);
    if total == 0.0 {
        return 0.0;
    }
    let cut = (1.0 - BOUNDARY_COLLAR) * f.grid.radius;
    let outer: f64 =
        f.w.iter()
            .enumerate()
            .filter(|(j, _)| f.grid.node(*j) >= cut)
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            * f.quadrature_weight();
    outer / total
}
