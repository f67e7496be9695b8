//! The cube `[-1, 1]³` with the normalized product Chebyshev weight
//! `π⁻³ Π (1 - x_i²)^{-1/2}`.
//!
//! Nodes are the even-parity and odd-parity sublattices of the tensor grid of
//! Chebyshev–Lobatto points `cos(kπ/n)`, `n = L + 1`. Because every node sits
//! on that grid, coefficients can also be computed by three cosine sums over
//! a zero-padded grid ([`cube_fast_coefficients`]).

use alloc::vec;
use alloc::vec::Vec;

use super::MEMBERSHIP_SLACK;
use crate::basis::{Basis, BasisMatrix, Family};
use crate::engine::CoefficientVector;
use crate::error::{Error, Result};
use crate::math;
use crate::quadrature::QuadratureRule;

pub(crate) fn contains(x: &[f64]) -> bool {
    x.iter().all(|c| math::abs(*c) <= 1.0 + MEMBERSHIP_SLACK)
}

/// Exponents `(ℓ₁, ℓ₂, ℓ₃)` with `ℓ₁ + ℓ₂ + ℓ₃ ≤ L`, in column order: by
/// total degree, then by decreasing `ℓ₁`, then decreasing `ℓ₂`.
pub fn multi_indices(degree: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(Family::ChebyshevProduct.len(degree));
    for n in 0..=degree {
        for a in (0..=n).rev() {
            for b in (0..=n - a).rev() {
                out.push([a, b, n - a - b]);
            }
        }
    }
    out
}

/// Lobatto grid positions `(i, j, k)` of the nodes of [`cube_rule`], in node
/// order: the even sublattice first, then the odd one, each lexicographic.
pub fn grid_positions(degree: usize) -> Vec<[usize; 3]> {
    let n = degree + 1;
    let mut out = Vec::new();
    for parity in 0..2 {
        for i in (parity..=n).step_by(2) {
            for j in (parity..=n).step_by(2) {
                for k in (parity..=n).step_by(2) {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

fn lobatto(i: usize, n: usize) -> f64 {
    if i == 0 {
        1.0
    } else if i == n {
        -1.0
    } else {
        math::cos_pi_ratio(i, n)
    }
}

/// Cubature rule of degree `2L + 1` for the product Chebyshev measure.
///
/// Weights are `4/(L+1)³` scaled by `1, 1/2, 1/4, 1/8` for interior, face,
/// edge and vertex nodes; the class is the number of coordinates on the
/// boundary grid lines `i ∈ {0, L+1}`, which are stored as exact `±1`.
pub fn cube_rule(degree: usize) -> Result<QuadratureRule> {
    if degree == 0 {
        return Err(Error::param("the cube rule needs L >= 1"));
    }
    let n = degree + 1;
    let base = 4.0 / (n * n * n) as f64;
    let positions = grid_positions(degree);
    let mut nodes = Vec::with_capacity(3 * positions.len());
    let mut weights = Vec::with_capacity(positions.len());
    for p in &positions {
        let boundary = p.iter().filter(|&&i| i == 0 || i == n).count();
        nodes.extend(p.iter().map(|&i| lobatto(i, n)));
        weights.push(base / (1u32 << boundary) as f64);
    }
    QuadratureRule::new(3, nodes, weights, 2 * degree + 1, 1.0)
}

/// `T̃_0 = 1`, `T̃_k = √2 T_k` for `k = 0..=degree`.
fn normalized_chebyshev(degree: usize, x: f64, out: &mut [f64]) {
    let mut prev = 1.0;
    let mut cur = x;
    out[0] = 1.0;
    for (k, o) in out.iter_mut().enumerate().take(degree + 1).skip(1) {
        if k > 1 {
            let next = 2.0 * x * cur - prev;
            prev = cur;
            cur = next;
        }
        *o = math::SQRT_2 * cur;
    }
}

pub(crate) fn chebyshev_row(degree: usize, x: &[f64], out: &mut [f64]) {
    let m = degree + 1;
    let mut t = vec![0.0; 3 * m];
    for axis in 0..3 {
        normalized_chebyshev(degree, x[axis], &mut t[axis * m..(axis + 1) * m]);
    }
    let (t1, rest) = t.split_at(m);
    let (t2, t3) = rest.split_at(m);
    let mut col = 0;
    for n in 0..=degree {
        for a in (0..=n).rev() {
            for b in (0..=n - a).rev() {
                out[col] = t1[a] * t2[b] * t3[n - a - b];
                col += 1;
            }
        }
    }
}

/// Product Chebyshev basis matrix at `nodes`, `d = (L+1)(L+2)(L+3)/6`.
pub fn cube_basis(degree: usize, nodes: &[f64]) -> Result<BasisMatrix> {
    Basis::new(Family::ChebyshevProduct, degree)?.matrix(nodes)
}

/// Side length `L + 2` of the zero-padded Lobatto grid.
pub fn grid_side(degree: usize) -> usize {
    degree + 2
}

/// The padded grid `F` with `F = w f` on the rule's nodes and 0 elsewhere.
/// Entry `(i, j, k)` sits at `(i·s + j)·s + k`, `s = L + 2`, and corresponds
/// to the point `(cos iπ/n, cos jπ/n, cos kπ/n)`.
pub fn cube_weighted_grid(degree: usize, f_vals: &[f64]) -> Result<Vec<f64>> {
    let rule = cube_rule(degree)?;
    if f_vals.len() != rule.len() {
        return Err(Error::Dimension {
            expected: rule.len(),
            found: f_vals.len(),
        });
    }
    let s = grid_side(degree);
    let mut grid = vec![0.0; s * s * s];
    for ((p, w), f) in grid_positions(degree)
        .iter()
        .zip(rule.weights())
        .zip(f_vals)
    {
        grid[(p[0] * s + p[1]) * s + p[2]] = w * f;
    }
    Ok(grid)
}

/// Hyperinterpolation coefficients from the padded grid by separable cosine
/// sums, `O(L⁴)` instead of the `O(L⁶)` dense product.
///
/// `α_ℓ = γ_ℓ Σ_i Σ_j Σ_k F_ijk cos(iℓ₁π/n) cos(jℓ₂π/n) cos(kℓ₃π/n)` with a
/// factor `√2` in `γ_ℓ` for every nonzero exponent. Entries follow
/// [`multi_indices`].
pub fn cube_fast_coefficients(degree: usize, grid: &[f64]) -> Result<CoefficientVector> {
    let s = grid_side(degree);
    let n = degree + 1;
    separable_coefficients(degree, s, grid, |i, l| math::cos_pi_ratio(i * l, n))
}

/// Contracts a weighted `s × s × s` tensor grid against `γ_l c(i, l)` on
/// every axis, where `c(i, l) = T_l` at the `i`-th axis node.
fn separable_coefficients<C: Fn(usize, usize) -> f64>(
    degree: usize,
    s: usize,
    grid: &[f64],
    cheb: C,
) -> Result<CoefficientVector> {
    if grid.len() != s * s * s {
        return Err(Error::Dimension {
            expected: s * s * s,
            found: grid.len(),
        });
    }
    let m = degree + 1;
    // table[i * m + l] = γ_l T_l(x_i)
    let mut table = vec![0.0; s * m];
    for i in 0..s {
        for l in 0..m {
            let gamma = if l == 0 { 1.0 } else { math::SQRT_2 };
            table[i * m + l] = gamma * cheb(i, l);
        }
    }

    // contract k -> ℓ₃
    let mut g1 = vec![0.0; s * s * m];
    for ij in 0..s * s {
        let row = &grid[ij * s..(ij + 1) * s];
        let out = &mut g1[ij * m..(ij + 1) * m];
        for (k, &f) in row.iter().enumerate() {
            if f != 0.0 {
                for (o, t) in out.iter_mut().zip(&table[k * m..(k + 1) * m]) {
                    *o += f * t;
                }
            }
        }
    }
    // contract j -> ℓ₂, keeping ℓ₂ + ℓ₃ ≤ L; g2[(i * m + l2) * m + l3]
    let mut g2 = vec![0.0; s * m * m];
    for i in 0..s {
        for j in 0..s {
            let src = &g1[(i * s + j) * m..(i * s + j + 1) * m];
            for l2 in 0..m {
                let t = table[j * m + l2];
                let dst = &mut g2[(i * m + l2) * m..(i * m + l2) * m + (m - l2)];
                for (o, v) in dst.iter_mut().zip(src) {
                    *o += t * v;
                }
            }
        }
    }
    // contract i -> ℓ₁
    let indices = multi_indices(degree);
    let entries = indices
        .iter()
        .map(|&[l1, l2, l3]| {
            (0..s)
                .map(|i| table[i * m + l1] * g2[(i * m + l2) * m + l3])
                .sum()
        })
        .collect();
    Ok(CoefficientVector::plain(entries))
}

/// Coefficients `Σ w f p_ℓ` on [`chebyshev_gauss_tensor_rule`]`(m)` by the
/// same separable sums as [`cube_fast_coefficients`]. `weighted` holds
/// `w_j f(x_j)` in the rule's node order.
pub fn chebyshev_gauss_tensor_coefficients(
    degree: usize,
    m: usize,
    weighted: &[f64],
) -> Result<CoefficientVector> {
    separable_coefficients(degree, m, weighted, |i, l| {
        math::cos_pi_ratio(l * (2 * i + 1), 2 * m)
    })
}

/// Tensor Chebyshev–Gauss rule with `m` points per axis, equal weights
/// `1/m³`, exact for degree `2m - 1` in each variable.
pub fn chebyshev_gauss_tensor_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::param("need at least one point per axis"));
    }
    let axis: Vec<f64> = (0..m)
        .map(|k| math::cos(math::PI * (2 * k + 1) as f64 / (2 * m) as f64))
        .collect();
    let mut nodes = Vec::with_capacity(3 * m * m * m);
    for a in &axis {
        for b in &axis {
            for c in &axis {
                nodes.extend_from_slice(&[*a, *b, *c]);
            }
        }
    }
    let w = 1.0 / (m * m * m) as f64;
    QuadratureRule::new(3, nodes, vec![w; m * m * m], 2 * m - 1, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_and_column_counts() {
        assert_eq!(grid_positions(50).len(), 35152);
        assert_eq!(Family::ChebyshevProduct.len(50), 23426);
        assert_eq!(multi_indices(50).len(), 23426);
        assert_eq!(multi_indices(49).len(), 22100);
        assert_eq!(cube_rule(20).unwrap().len(), 2662);
    }

    #[test]
    fn unit_volume() {
        for l in [1, 2, 5, 20, 50] {
            let rule = cube_rule(l).unwrap();
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "L = {l}");
        }
    }

    #[test]
    fn second_moment_per_axis() {
        let rule = cube_rule(3).unwrap();
        for axis in 0..3 {
            let v = rule.integrate(|x| x[axis] * x[axis]);
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_column() {
        let mut out = vec![0.0; 10];
        chebyshev_row(2, &[0.1, -0.7, 0.3], &mut out);
        assert_eq!(out[0], 1.0);
        assert!((out[1] - 2f64.sqrt() * 0.1).abs() < 1e-15);
    }

    #[test]
    fn constant_function_gives_unit_first_coefficient() {
        let l = 4;
        let rule = cube_rule(l).unwrap();
        let grid = cube_weighted_grid(l, &vec![1.0; rule.len()]).unwrap();
        let alpha = cube_fast_coefficients(l, &grid).unwrap();
        assert!((alpha.entries()[0] - 1.0).abs() < 1e-13);
        assert!(alpha.entries()[1..].iter().all(|c| c.abs() < 1e-13));
    }

    #[test]
    fn grid_shape_is_checked() {
        assert!(matches!(
            cube_fast_coefficients(3, &[0.0; 10]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn lower_degree_zero_is_rejected() {
        assert!(cube_rule(0).is_err());
    }

    #[test]
    fn tensor_rule_coefficients_match_dense() {
        let (degree, m) = (4, 6);
        let rule = chebyshev_gauss_tensor_rule(m).unwrap();
        let f: Vec<f64> = rule
            .nodes()
            .map(|x| math::cos(x[0] + 2.0 * x[1] * x[2]) + x[2])
            .collect();
        let weighted: Vec<f64> = f.iter().zip(rule.weights()).map(|(f, w)| f * w).collect();
        let fast = chebyshev_gauss_tensor_coefficients(degree, m, &weighted).unwrap();
        let a = cube_basis(degree, rule.node_data()).unwrap();
        for (l, c) in fast.entries().iter().enumerate() {
            let dense: f64 = a.column(l).iter().zip(&weighted).map(|(p, w)| p * w).sum();
            assert!((c - dense).abs() < 1e-13);
        }
    }
}
