//! Hyperinterpolation and its thresholded variants.
//!
//! Given a positive-weight quadrature rule that is exact at degree `2L` and a
//! basis of polynomials of degree at most `L` that is orthonormal under the
//! rule's discrete inner product, the coefficients `α = AᵀWf` define the
//! hyperinterpolant of `f`. This crate computes those coefficients and the
//! filtered, Lasso (soft threshold) and hard threshold variants, together with
//! the standard domains (interval, disc, sphere, cube), seedable noise models
//! and the error measures used to compare the schemes.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x >= 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod domains;
pub mod engine;
mod error;
pub(crate) mod math;
pub mod metrics;
pub mod noise;
pub mod quadrature;

pub use basis::{Basis, BasisMatrix, Family};
pub use engine::{
    apply_threshold, brute_force_l0, discrete_inner_product, filter_weight, hard_threshold,
    hyper_coefficients, l0_objective, soft_threshold, Approximant, CoefficientKind,
    CoefficientVector, Discretization, Scheme,
};
pub use error::{Error, Result};
pub use quadrature::QuadratureRule;

/// Maximum entry deviation tolerated in `AᵀWA = I`.
pub const GRAM_TOLERANCE: f64 = 1e-10;
