//! Exhaustive minimization of the `ℓ₀`-regularized weighted least squares
//! objective, used to certify the closed-form hard thresholding solution.

use alloc::vec;
use alloc::vec::Vec;

use super::{check_len, hyper_coefficients};
use crate::basis::BasisMatrix;
use crate::error::{Error, Result};

/// Largest basis size [`brute_force_l0`] will enumerate.
pub const ORACLE_LIMIT: usize = 20;

/// `G(β) = ‖W^{1/2}(Aβ - f)‖² + λ²‖β‖₀`.
pub fn l0_objective(
    beta: &[f64],
    basis: &BasisMatrix,
    weights: &[f64],
    f_vals: &[f64],
    lambda: f64,
) -> Result<f64> {
    check_len(basis.cols(), beta.len())?;
    check_len(basis.rows(), weights.len())?;
    check_len(basis.rows(), f_vals.len())?;
    if !(lambda >= 0.0) {
        return Err(Error::param("lambda must be non-negative"));
    }
    let fitted = basis.apply(beta)?;
    let residual: f64 = fitted
        .iter()
        .zip(f_vals)
        .zip(weights)
        .map(|((p, f), w)| w * (p - f) * (p - f))
        .sum();
    let support = beta.iter().filter(|b| **b != 0.0).count();
    Ok(residual + lambda * lambda * support as f64)
}

/// Exact minimizer of [`l0_objective`] by enumeration of supports.
///
/// With `AᵀWA = I` the best coefficients on a fixed support `S` are the plain
/// coefficients restricted to `S`, so only supports inside the nonzero set of
/// `α` need to be visited. Equal objective values are resolved toward the
/// smaller support, then the lexicographically smallest index list.
pub fn brute_force_l0(
    basis: &BasisMatrix,
    weights: &[f64],
    f_vals: &[f64],
    lambda: f64,
) -> Result<Vec<f64>> {
    let d = basis.cols();
    if d > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            size: d,
            limit: ORACLE_LIMIT,
        });
    }
    if !(lambda >= 0.0) {
        return Err(Error::param("lambda must be non-negative"));
    }
    let alpha = hyper_coefficients(basis, weights, f_vals)?;
    let alpha = alpha.entries();
    let candidates: Vec<usize> = (0..d).filter(|&l| alpha[l] != 0.0).collect();

    let mut beta = vec![0.0; d];
    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 0u32..(1u32 << candidates.len()) {
        let support: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &l)| l)
            .collect();
        beta.iter_mut().for_each(|b| *b = 0.0);
        for &l in &support {
            beta[l] = alpha[l];
        }
        let value = l0_objective(&beta, basis, weights, f_vals, lambda)?;
        let better = match &best {
            None => true,
            Some((v, s)) => {
                value < *v
                    || (value == *v
                        && (support.len() < s.len() || (support.len() == s.len() && support < *s)))
            }
        };
        if better {
            best = Some((value, support));
        }
    }

    let mut out = vec![0.0; d];
    if let Some((_, support)) = best {
        for l in support {
            out[l] = alpha[l];
        }
    }
    Ok(out)
}
