//! Radial discretisation of `K_λ = -Δ + λ|x|^{-2}`.
//!
//! For radial `u` in N dimensions the substitution `w = r^{(N-1)/2} u` turns
//! `K_λ` into the half-line operator `-d²/dr² + c_eff / r²` with
//! `c_eff = λ + λ_N - 1/4`, so `λ > -λ_N` is the 1D threshold `c_eff > -1/4`.
//! The reduced operator is discretised on the cell-centred grid
//! `r_j = (j + 1/2) h` with Dirichlet conditions at `r = 0` and `r = R`
//! (antisymmetric ghost cells), which realises the Friedrichs extension and
//! never evaluates a singular weight at the origin.

use std::f64::consts::PI;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::params::lambda_n;

/// Surface area of the unit sphere in `R^N`.
pub fn sphere_area(dim: usize) -> f64 {
    let half = dim as f64 / 2.0;
    let (mut x, mut gamma) = if dim.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (0.5, PI.sqrt())
    };
    while x < half {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(half) / gamma
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub radius: f64,
    pub cells: usize,
}

impl RadialGrid {
    pub fn new(radius: f64, cells: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(invalid("R", format!("domain radius must be positive (got {radius})")));
        }
        if cells < 4 {
            return Err(invalid("n", format!("need at least 4 cells (got {cells})")));
        }
        Ok(RadialGrid { radius, cells })
    }

    pub fn spacing(&self) -> f64 {
        self.radius / self.cells as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.cells).map(move |j| self.node(j))
    }

    /// Same cell count on `[0, R/β]`: the discrete image of `x ↦ β x`.
    pub fn dilated(&self, beta: f64) -> RadialGrid {
        RadialGrid {
            radius: self.radius / beta,
            cells: self.cells,
        }
    }
}

/// Reduced radial profile `w_j = r_j^{(N-1)/2} u(r_j)` with a time label.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedField {
    pub grid: RadialGrid,
    pub dim: usize,
    pub w: Vec<Complex64>,
    pub t: f64,
}

impl ReducedField {
    pub fn zeros(grid: RadialGrid, dim: usize) -> Self {
        ReducedField {
            grid,
            dim,
            w: vec![Complex64::new(0.0, 0.0); grid.cells],
            t: 0.0,
        }
    }

    /// Samples a radial profile `u(r)` at the grid nodes.
    pub fn from_radial(grid: RadialGrid, dim: usize, u: impl Fn(f64) -> Complex64) -> Self {
        let e = (dim as f64 - 1.0) / 2.0;
        let w = grid.nodes().map(|r| u(r) * r.powf(e)).collect();
        ReducedField { grid, dim, w, t: 0.0 }
    }

    pub fn from_real_radial(grid: RadialGrid, dim: usize, u: impl Fn(f64) -> f64) -> Self {
        Self::from_radial(grid, dim, |r| Complex64::new(u(r), 0.0))
    }

    /// Builds a field from `u(r_j)` values.
    pub fn from_u_values(grid: RadialGrid, dim: usize, u: &[Complex64]) -> Self {
        assert_eq!(u.len(), grid.cells);
        let e = (dim as f64 - 1.0) / 2.0;
        let w = grid.nodes().zip(u).map(|(r, &uj)| uj * r.powf(e)).collect();
        ReducedField { grid, dim, w, t: 0.0 }
    }

    /// `u(r_j) = r_j^{-(N-1)/2} w_j`.
    pub fn u_values(&self) -> Vec<Complex64> {
        let e = (self.dim as f64 - 1.0) / 2.0;
        self.grid.nodes().zip(&self.w).map(|(r, &wj)| wj / r.powf(e)).collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.w.iter_mut().for_each(|z| *z *= c);
        out
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|z| z.norm_sqr() == 0.0)
    }

    /// Same samples viewed on the dilated grid `R/β`, with amplitude `s`:
    /// the discrete image of `s u(β x)`.
    pub fn dilated(&self, beta: f64, amplitude: f64) -> Self {
        let grid = self.grid.dilated(beta);
        let u: Vec<Complex64> = self.u_values().into_iter().map(|z| z * amplitude).collect();
        ReducedField::from_u_values(grid, self.dim, &u).with_time(self.t)
    }

    pub(crate) fn quadrature_weight(&self) -> f64 {
        sphere_area(self.dim) * self.grid.spacing()
    }
}

/// Tridiagonal matrix of `-d²/dr² + c_eff/r²` (Dirichlet at both ends).
#[derive(Clone, Debug)]
pub struct RadialOperator {
    pub grid: RadialGrid,
    pub dim: usize,
    pub lambda: f64,
    pub c_eff: f64,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl RadialOperator {
    pub fn new(grid: RadialGrid, dim: usize, lambda: f64) -> Result<Self> {
        let ln = lambda_n(dim)?;
        if !(lambda > -ln) {
            return Err(invalid(
                "lambda",
                format!("operator needs lambda > -lambda_N = {} strictly (got {lambda})", -ln),
            ));
        }
        let n = grid.cells;
        let h = grid.spacing();
        let inv_h2 = 1.0 / (h * h);
        let c_eff = lambda + ln - 0.25;
        let diag = (0..n)
            .map(|j| {
                let r = grid.node(j);
                let ends = if j == 0 || j == n - 1 { 3.0 } else { 2.0 };
                ends * inv_h2 + c_eff / (r * r)
            })
            .collect();
        Ok(RadialOperator {
            grid,
            dim,
            lambda,
            c_eff,
            diag,
            offdiag: vec![-inv_h2; n - 1],
        })
    }

    pub fn check(&self, f: &ReducedField) -> Result<()> {
        if f.grid != self.grid || f.dim != self.dim {
            return Err(Error::GridMismatch {
                expected: self.grid.cells,
                found: f.grid.cells,
            });
        }
        Ok(())
    }

    pub fn apply(&self, w: &[Complex64]) -> Vec<Complex64> {
        let n = self.diag.len();
        (0..n)
            .map(|j| {
                let mut acc = w[j] * self.diag[j];
                if j > 0 {
                    acc += w[j - 1] * self.offdiag[j - 1];
                }
                if j + 1 < n {
                    acc += w[j + 1] * self.offdiag[j];
                }
                acc
            })
            .collect()
    }

    pub fn apply_real(&self, w: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|j| {
                let mut acc = w[j] * self.diag[j];
                if j > 0 {
                    acc += w[j - 1] * self.offdiag[j - 1];
                }
                if j + 1 < n {
                    acc += w[j + 1] * self.offdiag[j];
                }
                acc
            })
            .collect()
    }

    /// `<K_λ f, f> = ‖√K_λ f‖²`.
    pub fn quadratic_form(&self, f: &ReducedField) -> Result<f64> {
        self.check(f)?;
        Ok(self.quadratic_form_raw(&f.w) * f.quadrature_weight())
    }

    /// `Σ conj(w) (T w)` without the quadrature weight.
    pub(crate) fn quadratic_form_raw(&self, w: &[Complex64]) -> f64 {
        let n = w.len();
        let mut acc = 0.0;
        for j in 0..n {
            acc += self.diag[j] * w[j].norm_sqr();
            if j + 1 < n {
                acc += 2.0 * self.offdiag[j] * (w[j].conj() * w[j + 1]).re;
            }
        }
        acc
    }

    /// Solves `(T + shift) x = rhs` by the Thomas algorithm.
    pub fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0] + shift;
        c[0] = if n > 1 { self.offdiag[0] / denom } else { 0.0 };
        d[0] = rhs[0] / denom;
        for j in 1..n {
            denom = self.diag[j] + shift - self.offdiag[j - 1] * c[j - 1];
            if j + 1 < n {
                c[j] = self.offdiag[j] / denom;
            }
            d[j] = (rhs[j] - self.offdiag[j - 1] * d[j - 1]) / denom;
        }
        for j in (0..n - 1).rev() {
            d[j] -= c[j] * d[j + 1];
        }
        d
    }
}

/// [`RadialOperator`] with its full eigen-decomposition `T = V diag(e) Vᵀ`.
///
/// Immutable after construction; share it across threads freely.
#[derive(Clone, Debug)]
pub struct SpectralOperator {
    pub radial: RadialOperator,
    /// Ascending.
    pub eigvals: Vec<f64>,
    /// Columns are orthonormal eigenvectors.
    pub eigvecs: Mat<f64>,
}

/// Assembles `K_λ` on `grid` and diagonalises it.
pub fn build_operator(grid: RadialGrid, dim: usize, lambda: f64) -> Result<SpectralOperator> {
    SpectralOperator::new(RadialOperator::new(grid, dim, lambda)?)
}

impl SpectralOperator {
    pub fn new(radial: RadialOperator) -> Result<Self> {
        let n = radial.grid.cells;
        let dense = Mat::<f64>::from_fn(n, n, |i, j| {
            if i == j {
                radial.diag[i]
            } else if i == j + 1 {
                radial.offdiag[j]
            } else if j == i + 1 {
                radial.offdiag[i]
            } else {
                0.0
            }
        });
        let evd = dense
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| invalid("operator", format!("eigen-decomposition failed: {e:?}")))?;
        let s = evd.S();
        let eigvals: Vec<f64> = (0..n).map(|k| s[k]).collect();
        let mut eigvecs = evd.U().to_owned();
        reorthonormalize(&mut eigvecs);
        Ok(SpectralOperator {
            radial,
            eigvals,
            eigvecs,
        })
    }

    pub fn grid(&self) -> RadialGrid {
        self.radial.grid
    }

    pub fn dim(&self) -> usize {
        self.radial.dim
    }

    pub fn lambda(&self) -> f64 {
        self.radial.lambda
    }

    pub fn len(&self) -> usize {
        self.eigvals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigvals.is_empty()
    }

    pub fn quadratic_form(&self, f: &ReducedField) -> Result<f64> {
        self.radial.quadratic_form(f)
    }

    /// Coefficients `Vᵀ w`.
    pub fn to_spectral(&self, w: &[Complex64]) -> Vec<Complex64> {
        self.transform(w, true)
    }

    /// Samples `V c`.
    pub fn from_spectral(&self, c: &[Complex64]) -> Vec<Complex64> {
        self.transform(c, false)
    }

    fn transform(&self, x: &[Complex64], transpose: bool) -> Vec<Complex64> {
        let n = self.len();
        assert_eq!(x.len(), n);
        let rhs = Mat::<f64>::from_fn(n, 2, |i, j| if j == 0 { x[i].re } else { x[i].im });
        let mut out = Mat::<f64>::zeros(n, 2);
        let lhs = if transpose {
            self.eigvecs.as_ref().transpose()
        } else {
            self.eigvecs.as_ref()
        };
        matmul(out.as_mut(), Accum::Replace, lhs, rhs.as_ref(), 1.0, Par::Seq);
        (0..n).map(|i| Complex64::new(out[(i, 0)], out[(i, 1)])).collect()
    }

    /// `c_k ← exp(-i e_k dt) c_k`.
    pub fn rotate_spectral(&self, c: &mut [Complex64], dt: f64) {
        for (ck, &e) in c.iter_mut().zip(&self.eigvals) {
            *ck *= Complex64::from_polar(1.0, -e * dt);
        }
    }

    /// `U_λ(dt) = exp(-i dt K_λ)` applied to raw samples.
    pub fn propagate_samples(&self, w: &[Complex64], dt: f64) -> Vec<Complex64> {
        if dt == 0.0 {
            return w.to_vec();
        }
        let mut c = self.to_spectral(w);
        self.rotate_spectral(&mut c, dt);
        self.from_spectral(&c)
    }

    /// `U_λ(dt) f`; the time label advances by `dt`.
    pub fn propagate(&self, f: &ReducedField, dt: f64) -> Result<ReducedField> {
        self.radial.check(f)?;
        Ok(ReducedField {
            grid: f.grid,
            dim: f.dim,
            w: self.propagate_samples(&f.w, dt),
            t: f.t + dt,
        })
    }

    /// Eigenvector `k` as a field, with unit discrete mass.
    pub fn eigenmode(&self, k: usize) -> ReducedField {
        let grid = self.grid();
        let weight = sphere_area(self.dim()) * grid.spacing();
        let scale = 1.0 / weight.sqrt();
        let w = (0..self.len())
            .map(|i| Complex64::new(self.eigvecs[(i, k)] * scale, 0.0))
            .collect();
        ReducedField {
            grid,
            dim: self.dim(),
            w,
            t: 0.0,
        }
    }

    /// `max_k ‖T v_k - e_k v_k‖ / |e_k|`.
    pub fn max_relative_residual(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let v: Vec<f64> = (0..n).map(|i| self.eigvecs[(i, k)]).collect();
            let tv = self.radial.apply_real(&v);
            let res = tv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - self.eigvals[k] * b).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(res / self.eigvals[k].abs());
        }
        worst
    }

    /// `max |VᵀV - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.len();
        let mut gram = Mat::<f64>::zeros(n, n);
        matmul(
            gram.as_mut(),
            Accum::Replace,
            self.eigvecs.as_ref().transpose(),
            self.eigvecs.as_ref(),
            1.0,
            Par::Seq,
        );
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// `Σ e_k |c_k|²` times the quadrature weight: `‖√K_λ f‖²` from coefficients.
    pub fn spectral_quadratic_form(&self, c: &[Complex64]) -> f64 {
        let weight = sphere_area(self.dim()) * self.grid().spacing();
        c.iter()
            .zip(&self.eigvals)
            .map(|(ck, e)| e * ck.norm_sqr())
            .sum::<f64>()
            * weight
    }

    /// `‖f‖² + ‖√K_λ f‖²` from coefficients.
    pub fn spectral_h1_sq(&self, c: &[Complex64]) -> f64 {
        let weight = sphere_area(self.dim()) * self.grid().spacing();
        c.iter()
            .zip(&self.eigvals)
            .map(|(ck, e)| (1.0 + e) * ck.norm_sqr())
            .sum::<f64>()
            * weight
    }
}

/// One Löwdin sweep `V ← V (3I - VᵀV) / 2`.
fn reorthonormalize(v: &mut Mat<f64>) {
    let n = v.ncols();
    let mut gram = Mat::<f64>::zeros(n, n);
    matmul(
        gram.as_mut(),
        Accum::Replace,
        v.as_ref().transpose(),
        v.as_ref(),
        1.0,
        Par::Seq,
    );
    let correction = Mat::<f64>::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - 0.5 * (gram[(i, j)] - id)
    });
    let mut out = Mat::<f64>::zeros(v.nrows(), n);
    matmul(
        out.as_mut(),
        Accum::Replace,
        v.as_ref(),
        correction.as_ref(),
        1.0,
        Par::Seq,
    );
    *v = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn grid_is_cell_centred() {
        let g = RadialGrid::new(2.0, 8).unwrap();
        assert_eq!(g.spacing() * g.cells as f64, 2.0);
        assert_eq!(g.node(0), 0.125);
        assert!(g.nodes().all(|r| r > 0.0));
        assert!(RadialGrid::new(0.0, 8).is_err());
    }

    #[test]
    fn effective_coefficient() {
        let g = RadialGrid::new(10.0, 32).unwrap();
        assert!((RadialOperator::new(g, 3, 0.75).unwrap().c_eff - 0.75).abs() < 1e-15);
        assert!((RadialOperator::new(g, 5, 0.0).unwrap().c_eff - 2.0).abs() < 1e-15);
        assert!(RadialOperator::new(g, 3, -0.25).is_err());
        assert!(RadialOperator::new(g, 3, -0.3).is_err());
    }

    #[test]
    fn thomas_solver_inverts_shifted_operator() {
        let g = RadialGrid::new(5.0, 40).unwrap();
        let op = RadialOperator::new(g, 3, 1.0).unwrap();
        let x: Vec<f64> = (0..40).map(|j| (j as f64 * 0.3).sin() + 0.1).collect();
        let mut rhs = op.apply_real(&x);
        rhs.iter_mut().zip(&x).for_each(|(r, xi)| *r += 2.0 * xi);
        let back = op.solve_shifted(2.0, &rhs);
        for (a, b) in back.iter().zip(&x) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn dilation_round_trip() {
        let g = RadialGrid::new(4.0, 16).unwrap();
        let f = ReducedField::from_real_radial(g, 3, |r| (-r * r).exp());
        let d = f.dilated(2.0, 3.0);
        assert_eq!(d.grid.radius, 2.0);
        let back = d.dilated(0.5, 1.0 / 3.0);
        for (a, b) in back.w.iter().zip(&f.w) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
