//! The unit sphere `S²` with the area measure: equal-weight spherical designs
//! and real spherical harmonics.

use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{Basis, BasisMatrix, Family};
use crate::error::{Error, Result};
use crate::math;
use crate::quadrature::QuadratureRule;

/// Highest harmonic degree supported by the associated Legendre recurrence.
pub const MAX_DEGREE: usize = 60;

/// Nodes must satisfy `| |x| - 1 | ≤ UNIT_TOLERANCE`.
pub const UNIT_TOLERANCE: f64 = 1e-10;

/// Largest `|Σ w_j Y(x_j)|` accepted for a harmonic of degree `1..=t`.
pub const DESIGN_TOLERANCE: f64 = 1e-8;

pub const AREA: f64 = 4.0 * math::PI;

pub(crate) fn unit_deviation(x: &[f64]) -> f64 {
    math::abs(math::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - 1.0)
}

pub(crate) fn on_sphere(x: &[f64]) -> bool {
    unit_deviation(x) <= UNIT_TOLERANCE
}

/// Column of the harmonic of degree `l` and order `m` in the ordering used
/// by [`harmonic_row`]: `m = 0` first, then the cosine and sine parts of
/// `m = 1..=l`.
pub fn harmonic_index(l: usize, m: usize, sine: bool) -> usize {
    if m == 0 {
        l * l
    } else {
        l * l + 2 * m - usize::from(!sine)
    }
}

/// Real spherical harmonics up to `degree`, orthonormal for the area
/// measure, without the Condon–Shortley phase.
///
/// Uses `Y_{l,m} ∝ q_l^m(z) · Re/Im (x + iy)^m`, where `q_l^m` is the
/// normalized associated Legendre function divided by `(1 - z²)^{m/2}`, so
/// the poles need no special treatment.
pub(crate) fn harmonic_row(degree: usize, x: &[f64], out: &mut [f64]) {
    let (px, py, z) = (x[0], x[1], x[2]);
    let mut qmm = 1.0 / math::sqrt(AREA);
    let (mut re, mut im) = (1.0, 0.0);
    for m in 0..=degree {
        if m > 0 {
            qmm *= math::sqrt((2 * m + 1) as f64 / (2 * m) as f64);
            let next_re = re * px - im * py;
            im = re * py + im * px;
            re = next_re;
        }
        let mut q_prev = 0.0;
        let mut q = qmm;
        for l in m..=degree {
            if l == m + 1 {
                q_prev = q;
                q = z * math::sqrt((2 * m + 3) as f64) * qmm;
            } else if l > m + 1 {
                let (lf, mf) = (l as f64, m as f64);
                let a = math::sqrt((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf));
                let b = math::sqrt(
                    ((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0),
                );
                let next = a * (z * q - b * q_prev);
                q_prev = q;
                q = next;
            }
            if m == 0 {
                out[l * l] = q;
            } else {
                out[harmonic_index(l, m, false)] = math::SQRT_2 * q * re;
                out[harmonic_index(l, m, true)] = math::SQRT_2 * q * im;
            }
        }
    }
}

/// Spherical harmonic basis matrix at unit-vector `nodes`, `d = (L+1)²`.
pub fn spherical_harmonic_basis(degree: usize, nodes: &[f64]) -> Result<BasisMatrix> {
    Basis::new(Family::SphericalHarmonic, degree)?.matrix(nodes)
}

/// Equal-weight rule `4π/N` from the points of a spherical `t`-design.
///
/// The points are checked to be unit vectors and the design property is
/// verified: every harmonic of degree `1..=t` must integrate to zero within
/// [`DESIGN_TOLERANCE`].
pub fn sphere_design_rule(points: Vec<f64>, strength: usize) -> Result<QuadratureRule> {
    if !points.len().is_multiple_of(3) {
        return Err(Error::Dimension {
            expected: points.len().div_ceil(3) * 3,
            found: points.len(),
        });
    }
    if strength > MAX_DEGREE {
        return Err(Error::param(alloc::format!(
            "design strength {strength} exceeds the supported degree {MAX_DEGREE}"
        )));
    }
    let n = points.len() / 3;
    for (index, x) in points.chunks_exact(3).enumerate() {
        let deviation = unit_deviation(x);
        if !(deviation <= UNIT_TOLERANCE) {
            return Err(Error::NotUnitVector { index, deviation });
        }
    }
    if 2 * n < (strength + 1) * (strength + 1) {
        return Err(Error::param(alloc::format!(
            "{n} points are too few for a {strength}-design"
        )));
    }
    let weights = vec![AREA / n as f64; n];
    let rule = QuadratureRule::new(3, points, weights, strength, AREA)?;
    let (degree, residual) = design_residual(&rule, strength);
    if residual > DESIGN_TOLERANCE {
        return Err(Error::DesignIntegrity { degree, residual });
    }
    Ok(rule)
}

/// Largest `|Σ w_j Y(x_j)|` over harmonics of degree `1..=strength`, with the
/// degree where it occurs.
pub fn design_residual(rule: &QuadratureRule, strength: usize) -> (usize, f64) {
    if strength == 0 {
        return (0, 0.0);
    }
    let d = (strength + 1) * (strength + 1);
    let mut sums = vec![0.0; d];
    let mut row = vec![0.0; d];
    for (x, w) in rule.nodes().zip(rule.weights()) {
        harmonic_row(strength, x, &mut row);
        for (s, y) in sums.iter_mut().zip(&row) {
            *s += w * y;
        }
    }
    let mut worst = (1, 0.0);
    for l in 1..=strength {
        for s in &sums[l * l..(l + 1) * (l + 1)] {
            if math::abs(*s) > worst.1 {
                worst = (l, math::abs(*s));
            }
        }
    }
    worst
}

/// `n` nearly equal-area points on a generalized spiral (Fibonacci lattice),
/// flattened.
pub fn spiral_points(n: usize) -> Vec<f64> {
    let golden = math::PI * (3.0 - math::sqrt(5.0));
    let mut out = Vec::with_capacity(3 * n);
    for k in 0..n {
        let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
        let r = math::sqrt((1.0 - z * z).max(0.0));
        let phi = golden * (k + 1) as f64;
        out.push(r * math::cos(phi));
        out.push(r * math::sin(phi));
        out.push(z);
    }
    out
}

/// Equal-weight rule on [`spiral_points`]. It is not exact for any positive
/// degree and declares exactness 0.
pub fn spiral_rule(n: usize) -> Result<QuadratureRule> {
    QuadratureRule::new(3, spiral_points(n), vec![AREA / n as f64; n], 0, AREA)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::interval::gauss_legendre;

    /// Gauss–Legendre in `z` times the trapezoidal rule in the azimuth: exact
    /// for spherical polynomials of degree `< 2n` for `n` points in `z` and
    /// `2n` azimuths.
    fn product_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
        let (zs, wz) = gauss_legendre(n).unwrap();
        let na = 2 * n;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (z, w) in zs.iter().zip(&wz) {
            let r = (1.0 - z * z).sqrt();
            for k in 0..na {
                let phi = 2.0 * core::f64::consts::PI * k as f64 / na as f64;
                nodes.extend_from_slice(&[r * phi.cos(), r * phi.sin(), *z]);
                weights.push(w * 2.0 * core::f64::consts::PI / na as f64);
            }
        }
        (nodes, weights)
    }

    #[test]
    fn constant_harmonic() {
        let mut out = [0.0; 1];
        harmonic_row(0, &[0.0, 0.0, 1.0], &mut out);
        assert!((out[0] - 1.0 / (4.0 * core::f64::consts::PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn orthonormal_under_product_rule() {
        let (nodes, weights) = product_rule(26);
        let a = spherical_harmonic_basis(25, &nodes).unwrap();
        assert!(a.gram_deviation(&weights).unwrap() < 1e-12);
    }

    #[test]
    fn degree_one_harmonics_are_coordinates() {
        // Y_{1,0} = √(3/4π) z, Y_{1,1}^c = √(3/4π) x, Y_{1,1}^s = √(3/4π) y
        let c = (3.0 / (4.0 * core::f64::consts::PI)).sqrt();
        let x = [0.48, -0.6, 0.64];
        let mut out = [0.0; 4];
        harmonic_row(1, &x, &mut out);
        assert!((out[harmonic_index(1, 0, false)] - c * x[2]).abs() < 1e-15);
        assert!((out[harmonic_index(1, 1, false)] - c * x[0]).abs() < 1e-15);
        assert!((out[harmonic_index(1, 1, true)] - c * x[1]).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_unit_nodes() {
        let err = sphere_design_rule(vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.001], 0).unwrap_err();
        assert!(matches!(err, Error::NotUnitVector { index: 1, .. }));
    }

    #[test]
    fn spiral_is_not_a_design() {
        let err = sphere_design_rule(spiral_points(121), 10).unwrap_err();
        assert!(matches!(err, Error::DesignIntegrity { .. }));
    }

    #[test]
    fn octahedron_is_a_two_design() {
        let pts = vec![
            1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0,
            -1.0,
        ];
        let rule = sphere_design_rule(pts, 2).unwrap();
        assert!(design_residual(&rule, 3).1 < 1e-15);
        assert!((rule.weights().iter().sum::<f64>() - AREA).abs() < 1e-14);
        assert!(design_residual(&rule, 4).1 > 1e-3);
    }

    #[test]
    fn dimension_at_degree_15() {
        assert_eq!(Family::SphericalHarmonic.len(15), 256);
    }
}
