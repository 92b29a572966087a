//! Radial numerical laboratory for the damped inhomogeneous nonlinear
//! Schrödinger equation with an inverse-square potential,
//!
//! ```text
//! i ∂_t u + Δu - λ|x|^{-2} u + i a(t) u = μ |x|^{-b} |u|^{p-1} u.
//! ```
//!
//! Fields are radial and stored as `w = r^{(N-1)/2} u` on a cell-centred
//! grid; the linear flow is exact in the eigenbasis of the discrete
//! operator and the nonlinearity is split off Strang-style.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod damping;
pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod fields;
pub mod functionals;
pub mod groundstate;
pub mod io;
pub mod operator;
pub mod params;

pub use error::{Error, Result};
