//! Domain-agnostic hyperinterpolation: coefficients, thresholding operators,
//! approximants and the exhaustive `ℓ₀` oracle.

mod oracle;
mod threshold;

use alloc::vec;
use alloc::vec::Vec;

pub use oracle::{brute_force_l0, l0_objective, ORACLE_LIMIT};
pub use threshold::{apply_threshold, filter_weight, hard_threshold, soft_threshold, Scheme};

use crate::basis::{Basis, BasisMatrix};
use crate::error::{Error, Result};
use crate::math;
use crate::quadrature::QuadratureRule;
use crate::GRAM_TOLERANCE;

/// `⟨f, g⟩_N = Σ w_j f(x_j) g(x_j)`.
pub fn discrete_inner_product(f_vals: &[f64], g_vals: &[f64], weights: &[f64]) -> Result<f64> {
    check_len(weights.len(), f_vals.len())?;
    check_len(weights.len(), g_vals.len())?;
    if let Some((index, &weight)) = weights.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
        return Err(Error::NonPositiveWeight { index, weight });
    }
    Ok(weights
        .iter()
        .zip(f_vals)
        .zip(g_vals)
        .map(|((w, f), g)| w * f * g)
        .sum())
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// Plain hyperinterpolation coefficients `α = AᵀWf`.
///
/// The Gram identity is verified first, which costs `O(N d²)`; use
/// [`Discretization`] to pay that once for repeated solves.
pub fn hyper_coefficients(
    basis: &BasisMatrix,
    weights: &[f64],
    f_vals: &[f64],
) -> Result<CoefficientVector> {
    check_len(basis.rows(), weights.len())?;
    check_len(basis.rows(), f_vals.len())?;
    let deviation = basis.gram_deviation(weights)?;
    if !(deviation <= GRAM_TOLERANCE) {
        return Err(Error::InvalidBasis { deviation });
    }
    Ok(CoefficientVector::plain(project(basis, weights, f_vals)))
}

fn project(basis: &BasisMatrix, weights: &[f64], f_vals: &[f64]) -> Vec<f64> {
    let wf: Vec<f64> = weights.iter().zip(f_vals).map(|(w, f)| w * f).collect();
    basis
        .columns()
        .map(|col| col.iter().zip(&wf).map(|(a, b)| a * b).sum())
        .collect()
}

/// A quadrature rule paired with a basis matrix on its nodes whose Gram
/// identity has been checked.
#[derive(Debug, Clone)]
pub struct Discretization {
    rule: QuadratureRule,
    basis: BasisMatrix,
    gram_deviation: f64,
}

impl Discretization {
    pub fn new(rule: QuadratureRule, basis: BasisMatrix) -> Result<Self> {
        check_len(rule.len(), basis.rows())?;
        if rule.len() < basis.cols() {
            return Err(Error::param(alloc::format!(
                "{} nodes cannot determine {} coefficients",
                rule.len(),
                basis.cols()
            )));
        }
        let deviation = basis.gram_deviation(rule.weights())?;
        if !(deviation <= GRAM_TOLERANCE) {
            return Err(Error::InvalidBasis { deviation });
        }
        Ok(Self {
            rule,
            basis,
            gram_deviation: deviation,
        })
    }

    /// Builds the basis matrix of `basis` on the nodes of `rule` and checks it.
    pub fn from_family(rule: QuadratureRule, basis: &Basis) -> Result<Self> {
        check_len(basis.dim(), rule.dim())?;
        let matrix = basis.matrix(rule.node_data())?;
        Self::new(rule, matrix)
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn basis(&self) -> &BasisMatrix {
        &self.basis
    }

    pub fn gram_deviation(&self) -> f64 {
        self.gram_deviation
    }

    pub fn coefficients(&self, f_vals: &[f64]) -> Result<CoefficientVector> {
        check_len(self.rule.len(), f_vals.len())?;
        Ok(CoefficientVector::plain(project(
            &self.basis,
            self.rule.weights(),
            f_vals,
        )))
    }

    /// Values of `Σ c_ℓ p_ℓ` at the nodes.
    pub fn values_at_nodes(&self, coeffs: &CoefficientVector) -> Result<Vec<f64>> {
        self.basis.apply(coeffs.entries())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    Plain,
    Filtered,
    Lasso,
    Hard,
}

/// Coefficients in an orthonormal basis, tagged with the scheme that
/// produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    entries: Vec<f64>,
    kind: CoefficientKind,
    lambda: f64,
    mu: Option<Vec<f64>>,
}

impl CoefficientVector {
    pub fn plain(entries: Vec<f64>) -> Self {
        Self {
            entries,
            kind: CoefficientKind::Plain,
            lambda: 0.0,
            mu: None,
        }
    }

    pub(crate) fn with_kind(
        entries: Vec<f64>,
        kind: CoefficientKind,
        lambda: f64,
        mu: Option<Vec<f64>>,
    ) -> Self {
        Self {
            entries,
            kind,
            lambda,
            mu,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::plain(vec![0.0; len])
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Lasso penalty weights; `None` means `μ_ℓ = 1`.
    pub fn mu(&self) -> Option<&[f64]> {
        self.mu.as_deref()
    }

    /// `‖c‖₀`.
    pub fn nnz(&self) -> usize {
        self.entries.iter().filter(|c| **c != 0.0).count()
    }

    /// `‖c‖∞`.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, c| m.max(math::abs(*c)))
    }

    /// Euclidean norm of the coefficients, i.e. the `L₂` norm of the
    /// polynomial by Parseval.
    pub fn l2_norm(&self) -> f64 {
        math::sqrt(self.entries.iter().map(|c| c * c).sum())
    }
}

/// A basis family plus coefficients: the polynomial `Σ c_ℓ p_ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Approximant {
    basis: Basis,
    coeffs: CoefficientVector,
}

impl Approximant {
    pub fn new(basis: Basis, coeffs: CoefficientVector) -> Result<Self> {
        check_len(basis.len(), coeffs.len())?;
        Ok(Self { basis, coeffs })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn coeffs(&self) -> &CoefficientVector {
        &self.coeffs
    }

    /// Evaluates at flattened `points` (`dim` coordinates each).
    pub fn evaluate(&self, points: &[f64]) -> Result<Vec<f64>> {
        let s = self.basis.dim();
        if !points.len().is_multiple_of(s) {
            return Err(Error::Dimension {
                expected: points.len().div_ceil(s) * s,
                found: points.len(),
            });
        }
        let mut row = vec![0.0; self.basis.len()];
        points
            .chunks_exact(s)
            .enumerate()
            .map(|(index, x)| {
                if !self.basis.contains(x) {
                    return Err(Error::Domain { index });
                }
                Ok(self.value_with(x, &mut row))
            })
            .collect()
    }

    /// Value at a single point that is known to lie in the domain.
    pub fn value_with(&self, x: &[f64], scratch: &mut [f64]) -> f64 {
        self.basis.eval_row(x, scratch);
        scratch
            .iter()
            .zip(self.coeffs.entries())
            .map(|(p, c)| p * c)
            .sum()
    }
}
