use alloc::format;
use alloc::vec::Vec;

use super::{check_len, CoefficientKind, CoefficientVector};
use crate::error::{Error, Result};
use crate::math;

/// `η_H(a, k)`: `a` if `|a| > k`, else 0. The boundary `|a| = k` maps to 0.
#[inline]
pub fn hard_threshold(a: f64, k: f64) -> f64 {
    if math::abs(a) > k {
        a
    } else {
        0.0
    }
}

/// `η_S(a, k) = max(0, a - k) + min(0, a + k)`.
#[inline]
pub fn soft_threshold(a: f64, k: f64) -> f64 {
    (a - k).max(0.0) + (a + k).min(0.0)
}

/// Trigonometric filter: 1 on `[0, 1/2]`, `sin²(πx)` on `(1/2, 1)`, 0 from 1 on.
pub fn filter_weight(x: f64) -> f64 {
    if x <= 0.5 {
        1.0
    } else if x < 1.0 {
        let s = math::sin(math::PI * x);
        s * s
    } else {
        0.0
    }
}

/// How plain coefficients are turned into the final ones.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    Plain,
    /// Filtered hyperinterpolation with filter scale `degree` (usually `L`).
    Filtered {
        degree: usize,
    },
    /// Lasso hyperinterpolation; `mu = None` means every `μ_ℓ = 1`.
    Lasso {
        lambda: f64,
        mu: Option<Vec<f64>>,
    },
    Hard {
        lambda: f64,
    },
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!(
            "regularization parameter must be a finite non-negative number, got {lambda}"
        )))
    }
}

/// Applies `scheme` entrywise to plain coefficients. `degrees` gives
/// `deg p_ℓ` for every entry and is only consulted by the filter.
pub fn apply_threshold(
    alpha: &CoefficientVector,
    scheme: &Scheme,
    degrees: &[usize],
) -> Result<CoefficientVector> {
    if alpha.kind() != CoefficientKind::Plain {
        return Err(Error::param("thresholding expects plain coefficients"));
    }
    let a = alpha.entries();
    match scheme {
        Scheme::Plain => Ok(alpha.clone()),
        Scheme::Filtered { degree } => {
            check_len(a.len(), degrees.len())?;
            if *degree == 0 {
                return Err(Error::param("filter scale must be at least 1"));
            }
            let scale = *degree as f64;
            let entries = a
                .iter()
                .zip(degrees)
                .map(|(c, deg)| filter_weight(*deg as f64 / scale) * c)
                .collect();
            Ok(CoefficientVector::with_kind(
                entries,
                CoefficientKind::Filtered,
                0.0,
                None,
            ))
        }
        Scheme::Lasso { lambda, mu } => {
            check_lambda(*lambda)?;
            let entries = match mu {
                None => a.iter().map(|c| soft_threshold(*c, *lambda)).collect(),
                Some(mu) => {
                    check_len(a.len(), mu.len())?;
                    if let Some(m) = mu.iter().find(|m| !(**m > 0.0)) {
                        return Err(Error::param(format!(
                            "penalty weights must be positive, got {m}"
                        )));
                    }
                    a.iter()
                        .zip(mu)
                        .map(|(c, m)| soft_threshold(*c, lambda * m))
                        .collect()
                }
            };
            Ok(CoefficientVector::with_kind(
                entries,
                CoefficientKind::Lasso,
                *lambda,
                mu.clone(),
            ))
        }
        Scheme::Hard { lambda } => {
            check_lambda(*lambda)?;
            let entries = a.iter().map(|c| hard_threshold(*c, *lambda)).collect();
            Ok(CoefficientVector::with_kind(
                entries,
                CoefficientKind::Hard,
                *lambda,
                None,
            ))
        }
    }
}
