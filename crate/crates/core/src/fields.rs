//! Initial data and probe fields.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::operator::{RadialGrid, ReducedField};
use crate::params::kappa;

/// `amplitude · exp(-r²/(2 width²))`.
pub fn gaussian(grid: RadialGrid, dim: usize, width: f64, amplitude: f64) -> ReducedField {
    ReducedField::from_real_radial(grid, dim, |r| amplitude * (-r * r / (2.0 * width * width)).exp())
}

/// `amplitude · r^{-κ} exp(-r²/(2 width²))`: the Gaussian carrying the
/// regular Frobenius power `r^{√(λ_N+λ) - √λ_N}` at the origin.
pub fn regular_gaussian(grid: RadialGrid, dim: usize, lambda: f64, width: f64, amplitude: f64) -> Result<ReducedField> {
    let k = kappa(dim, lambda)?;
    Ok(ReducedField::from_real_radial(grid, dim, |r| {
        amplitude * r.powf(-k) * (-r * r / (2.0 * width * width)).exp()
    }))
}

/// Sum of three complex Gaussian bumps with random centres in `[0, R/3]`,
/// widths in `[0.3, 3]` (capped by `R/6`) and amplitudes of modulus at most 1.
pub fn random_smooth_field<R: Rng + ?Sized>(grid: RadialGrid, dim: usize, rng: &mut R) -> ReducedField {
    let s_max = 3f64.min(grid.radius / 6.0);
    let bumps: Vec<(Complex64, f64, f64)> = (0..3)
        .map(|_| {
            let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let c = rng.gen_range(0.0..grid.radius / 3.0);
            let s = rng.gen_range(0.3f64.min(s_max)..=s_max);
            (a, c, s)
        })
        .collect();
    ReducedField::from_radial(grid, dim, |r| {
        bumps
            .iter()
            .map(|&(a, c, s)| a * (-(r - c).powi(2) / (2.0 * s * s)).exp())
            .sum()
    })
}

/// Hardy near-optimiser `w = r^{1/2+ε} e^{-r}` in the reduced variable;
/// its continuum Hardy ratio is `λ_N + ε/2`.
pub fn hardy_near_optimizer(grid: RadialGrid, dim: usize, eps: f64) -> ReducedField {
    let half = (dim as f64 - 1.0) / 2.0;
    ReducedField::from_real_radial(grid, dim, |r| r.powf(0.5 + eps - half) * (-r).exp())
}
