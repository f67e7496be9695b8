//! User-supplied domains: an arbitrary positive rule with tabulated basis
//! values at its nodes.

use crate::basis::BasisMatrix;
use crate::engine::Discretization;
use crate::error::Result;
use crate::quadrature::QuadratureRule;

/// Pairs a rule and a tabulated basis, failing unless `AᵀWA = I` holds.
///
/// The rule's volume is taken to be `Σ w_j` and its exactness is asserted as
/// `2L`; the Gram identity on the basis products is the check that backs
/// that assertion.
pub fn custom_domain(rule: QuadratureRule, basis: BasisMatrix) -> Result<Discretization> {
    Discretization::new(rule, basis)
}
