//! The unit disc with measure `(1/π) dx`: a polar product rule and ridge
//! polynomials.

use alloc::vec::Vec;

use super::interval::gauss_legendre_unit;
use super::MEMBERSHIP_SLACK;
use crate::basis::{Basis, BasisMatrix, Family};
use crate::error::{Error, Result};
use crate::math;
use crate::quadrature::QuadratureRule;

pub(crate) fn contains(x: &[f64]) -> bool {
    x[0] * x[0] + x[1] * x[1] <= 1.0 + MEMBERSHIP_SLACK
}

/// Polar product rule exact for `P_{2n}` on the disc.
///
/// Radii are the `n + 1` Gauss–Legendre points of `[0, 1]`, angles are the
/// `2n + 1` equispaced `2πm/(2n+1)`, and the weight of `(r_j, θ_m)` is
/// `w_j · 2/(2n+1) · r_j`. Nodes are stored in Cartesian form; there are
/// `(n + 1)(2n + 1)` of them.
pub fn disc_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::param(
            "the disc rule needs a radial parameter of at least 1",
        ));
    }
    let (radii, radial_weights) = gauss_legendre_unit(n + 1)?;
    let azimuths = 2 * n + 1;
    let mut nodes = Vec::with_capacity(2 * (n + 1) * azimuths);
    let mut weights = Vec::with_capacity((n + 1) * azimuths);
    for (r, w) in radii.iter().zip(&radial_weights) {
        let weight = w * 2.0 / azimuths as f64 * r;
        for m in 0..azimuths {
            let theta = 2.0 * math::PI * m as f64 / azimuths as f64;
            nodes.push(r * math::cos(theta));
            nodes.push(r * math::sin(theta));
            weights.push(weight);
        }
    }
    QuadratureRule::new(2, nodes, weights, 2 * n, 1.0)
}

/// Ridge polynomials `Λ_{m,j}(x) = U_m(x · (cos θ_j, sin θ_j))`,
/// `θ_j = jπ/(m+1)`, `j = 0..=m`, `m = 0..=L`, with `U_m` the Chebyshev
/// polynomial of the second kind. They are orthonormal for `(1/π) dx`.
pub(crate) fn ridge_row(degree: usize, x: &[f64], out: &mut [f64]) {
    let mut col = 0;
    for m in 0..=degree {
        for j in 0..=m {
            let theta = math::PI * j as f64 / (m + 1) as f64;
            let t = x[0] * math::cos(theta) + x[1] * math::sin(theta);
            out[col] = chebyshev_u(m, t);
            col += 1;
        }
    }
}

fn chebyshev_u(m: usize, t: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 2.0 * t;
    for _ in 1..m {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Ridge basis matrix at `nodes`, `d = (L+1)(L+2)/2`.
pub fn ridge_basis(degree: usize, nodes: &[f64]) -> Result<BasisMatrix> {
    Basis::new(Family::Ridge, degree)?.matrix(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_volume_and_node_count() {
        let rule = disc_rule(135).unwrap();
        assert_eq!(rule.len(), 136 * 271);
        let sum: f64 = rule.weights().iter().sum();
        // naive summation over ~37k terms
        assert!((sum - 1.0).abs() < 1e-12, "{sum}");
    }

    #[test]
    fn second_moment_and_symmetry() {
        let rule = disc_rule(4).unwrap();
        let r2 = rule.integrate(|x| x[0] * x[0] + x[1] * x[1]);
        assert!((r2 - 0.5).abs() < 1e-12);
        assert!(rule.integrate(|x| x[0]).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_second_kind() {
        // U_m(cos φ) = sin((m+1)φ) / sin φ
        let phi = 0.7f64;
        for m in 0..10 {
            let expected = ((m as f64 + 1.0) * phi).sin() / phi.sin();
            assert!((chebyshev_u(m, phi.cos()) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_column_is_one() {
        let mut out = [0.0; 6];
        ridge_row(2, &[0.3, -0.2], &mut out);
        assert_eq!(out[0], 1.0);
    }

    #[test]
    fn column_count() {
        assert_eq!(Family::Ridge.len(16), 153);
    }

    #[test]
    fn rejects_points_outside() {
        assert_eq!(
            ridge_basis(2, &[0.0, 0.0, 0.9, 0.9]),
            Err(Error::Domain { index: 1 })
        );
    }
}
