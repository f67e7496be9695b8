//! Positive-weight quadrature rules.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Relative tolerance between `Σ w_j` and the declared domain volume.
pub const VOLUME_TOLERANCE: f64 = 1e-12;

/// Nodes `x_j ∈ R^s` with positive weights `w_j` and a declared exactness
/// degree. Nodes are stored flattened, `dim` coordinates per node.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exactness: usize,
    volume: f64,
}

impl QuadratureRule {
    pub fn new(
        dim: usize,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        exactness: usize,
        volume: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("node dimension must be positive"));
        }
        if weights.is_empty() {
            return Err(Error::param("a quadrature rule needs at least one node"));
        }
        if nodes.len() != dim * weights.len() {
            return Err(Error::Dimension {
                expected: dim * weights.len(),
                found: nodes.len(),
            });
        }
        if let Some((index, &weight)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0) || !w.is_finite())
        {
            return Err(Error::NonPositiveWeight { index, weight });
        }
        let sum = math::compensated_sum(&weights);
        if !(math::abs(sum - volume) <= VOLUME_TOLERANCE * math::abs(volume)) {
            return Err(Error::Volume { sum, volume });
        }
        Ok(Self {
            dim,
            nodes,
            weights,
            exactness,
            volume,
        })
    }

    /// Number of nodes `N`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self, j: usize) -> &[f64] {
        &self.nodes[j * self.dim..(j + 1) * self.dim]
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.nodes.chunks_exact(self.dim)
    }

    /// Flattened node coordinates.
    pub fn node_data(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exactness(&self) -> usize {
        self.exactness
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `Σ w_j g(x_j)`.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut g: F) -> f64 {
        self.nodes().zip(&self.weights).map(|(x, w)| w * g(x)).sum()
    }

    /// Values of `g` at every node.
    pub fn sample<F: FnMut(&[f64]) -> f64>(&self, g: F) -> Vec<f64> {
        self.nodes().map(g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_non_positive_weight() {
        let err = QuadratureRule::new(1, vec![0.0, 1.0], vec![2.5, -0.5], 0, 2.0).unwrap_err();
        assert_eq!(
            err,
            Error::NonPositiveWeight {
                index: 1,
                weight: -0.5
            }
        );
    }

    #[test]
    fn rejects_volume_mismatch() {
        assert!(matches!(
            QuadratureRule::new(1, vec![0.0], vec![2.0], 1, 2.1),
            Err(Error::Volume { .. })
        ));
    }

    #[test]
    fn rejects_ragged_nodes() {
        assert!(matches!(
            QuadratureRule::new(2, vec![0.0, 1.0, 2.0], vec![1.0, 1.0], 0, 2.0),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn integrates_with_weights() {
        let rule = QuadratureRule::new(1, vec![-0.5, 0.5], vec![1.0, 1.0], 1, 2.0).unwrap();
        assert_eq!(rule.integrate(|x| x[0] + 1.0), 2.0);
        assert_eq!(rule.node(1), &[0.5]);
    }
}
