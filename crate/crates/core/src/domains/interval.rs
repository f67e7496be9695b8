//! Gauss–Legendre quadrature and normalized Legendre polynomials on `[-1, 1]`.

use alloc::vec;
use alloc::vec::Vec;

use super::MEMBERSHIP_SLACK;
use crate::basis::{Basis, BasisMatrix, Family};
use crate::error::{Error, Result};
use crate::math;
use crate::quadrature::QuadratureRule;

pub(crate) fn contains(x: f64) -> bool {
    math::abs(x) <= 1.0 + MEMBERSHIP_SLACK
}

/// `n`-point Gauss–Legendre rule for `dx` on `[-1, 1]`, exact for `P_{2n-1}`.
pub fn gauss_legendre_rule(n: usize) -> Result<QuadratureRule> {
    let (nodes, weights) = gauss_legendre(n)?;
    QuadratureRule::new(1, nodes, weights, 2 * n - 1, 2.0)
}

/// Nodes (ascending) and weights of the `n`-point Gauss–Legendre rule.
///
/// Nodes are the eigenvalues of the Jacobi matrix of the Legendre recurrence
/// (Golub–Welsch), each refined by Newton steps on `P_n`; weights are
/// `2 / ((1 - x²) P_n'(x)²)`, rescaled to sum to 2. Symmetry about 0 is imposed exactly.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::param("a Gauss rule needs at least one node"));
    }
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for k in 1..n {
        let k = k as f64;
        off[k as usize - 1] = k / math::sqrt(4.0 * k * k - 1.0);
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_eigen(&mut diag, &mut off, &mut first)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let mut nodes: Vec<f64> = order.iter().map(|&i| diag[i]).collect();

    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = legendre_with_derivative(n, *x);
            let step = p / dp;
            *x -= step;
            if math::abs(step) < 1e-16 {
                break;
            }
        }
    }
    for i in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            // 2(1 - x²) / (n P_{n-1}(x))², with 1 - x² factored to keep
            // precision near the endpoints.
            let q = n as f64 * legendre_pair(n, x).1;
            2.0 * (1.0 - x) * (1.0 + x) / (q * q)
        })
        .collect();
    for i in 0..n / 2 {
        let w = 0.5 * (weights[i] + weights[n - 1 - i]);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    // Rounding in the nodes biases the weights by a few ulps each; rescale so
    // that constants integrate exactly.
    let total: f64 = weights.iter().sum();
    let scale = 2.0 / total;
    weights.iter_mut().for_each(|w| *w *= scale);
    Ok((nodes, weights))
}

/// Gauss–Legendre rule mapped to `[0, 1]` (weights sum to 1).
pub fn gauss_legendre_unit(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (nodes, weights) = gauss_legendre(n)?;
    Ok((
        nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights.iter().map(|w| 0.5 * w).collect(),
    ))
}

/// `(P_n(x), P_{n-1}(x))` for the unnormalized Legendre polynomials, `n ≥ 1`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// `(P_n(x), P_n'(x))` for the unnormalized Legendre polynomial, `|x| < 1`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (p, p_prev) = legendre_pair(n, x);
    let dp = n as f64 * (p_prev - x * p) / ((1.0 - x) * (1.0 + x));
    (p, dp)
}

/// Implicit QL iteration for a symmetric tridiagonal matrix. On return `diag`
/// holds the eigenvalues and `first` the first components of the
/// eigenvectors (when it started as `e₁`). `off[i]` couples `i` and `i + 1`.
fn tridiagonal_eigen(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = math::abs(diag[m]) + math::abs(diag[m + 1]);
                if math::abs(off[m]) <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::param(
                    "tridiagonal eigenvalue iteration did not converge",
                ));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = libm::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = libm::hypot(f, g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let z = first[i + 1];
                first[i + 1] = s * first[i] + c * z;
                first[i] = c * first[i] - s * z;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Writes `p_ℓ(x) = √((2ℓ+1)/2) P_ℓ(x)` for `ℓ = 0..=degree`.
pub(crate) fn legendre_row(degree: usize, x: f64, out: &mut [f64]) {
    let mut p_prev = 0.0;
    let mut p = 1.0;
    for (l, o) in out.iter_mut().enumerate().take(degree + 1) {
        if l > 0 {
            let k = (l - 1) as f64;
            let next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
            p_prev = p;
            p = next;
        }
        *o = math::sqrt((2.0 * l as f64 + 1.0) / 2.0) * p;
    }
}

/// Normalized Legendre basis matrix at `nodes`, `d = L + 1`.
pub fn legendre_basis(degree: usize, nodes: &[f64]) -> Result<BasisMatrix> {
    Basis::new(Family::Legendre, degree)?.matrix(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule_is_midpoint() {
        let rule = gauss_legendre_rule(1).unwrap();
        assert_eq!(rule.node(0), &[0.0]);
        assert!((rule.weights()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 3, 10, 57, 300, 1000] {
            let rule = gauss_legendre_rule(n).unwrap();
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "n = {n}: {sum}");
        }
    }

    #[test]
    fn sixteen_points_integrate_monomials_to_degree_31() {
        let rule = gauss_legendre_rule(16).unwrap();
        for k in 0..=31i32 {
            let exact = if k % 2 == 1 {
                0.0
            } else {
                2.0 / (k as f64 + 1.0)
            };
            let approx = rule.integrate(|x| x[0].powi(k));
            assert!(
                (approx - exact).abs() <= 1e-13 * exact.abs().max(1e-3),
                "k = {k}: {approx} vs {exact}"
            );
        }
    }

    #[test]
    fn known_three_point_rule() {
        let (x, w) = gauss_legendre(3).unwrap();
        let r = (0.6f64).sqrt();
        assert!((x[0] + r).abs() < 1e-15 && x[1] == 0.0 && (x[2] - r).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15 && (w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn normalized_legendre_values() {
        let mut out = [0.0; 3];
        legendre_row(2, 1.0, &mut out);
        assert!((out[0] - (0.5f64).sqrt()).abs() < 1e-15);
        assert!((out[1] - (1.5f64).sqrt()).abs() < 1e-15);
        assert!((out[2] - (2.5f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn basis_rejects_points_outside() {
        assert_eq!(
            legendre_basis(3, &[0.0, 1.5]),
            Err(Error::Domain { index: 1 })
        );
    }

    #[test]
    fn gram_identity_at_degree_250() {
        let rule = gauss_legendre_rule(300).unwrap();
        let a = legendre_basis(250, rule.node_data()).unwrap();
        let dev = a.gram_deviation(rule.weights()).unwrap();
        assert!(dev < 1e-10, "{dev}");
    }
}
