//! Orthonormal basis families and their evaluation matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::domains::{cube, disc, interval, sphere};
use crate::error::{Error, Result};
use crate::math;

/// The `N × d` matrix `A[j][ℓ] = p_ℓ(x_j)` together with the degree of
/// every column. Stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMatrix {
    rows: usize,
    values: Vec<f64>,
    degrees: Vec<usize>,
    total_degree: usize,
}

impl BasisMatrix {
    /// `values` holds `degrees.len()` columns of length `rows`, one after another.
    pub fn new(
        rows: usize,
        values: Vec<f64>,
        degrees: Vec<usize>,
        total_degree: usize,
    ) -> Result<Self> {
        if values.len() != rows * degrees.len() {
            return Err(Error::Dimension {
                expected: rows * degrees.len(),
                found: values.len(),
            });
        }
        if let Some(&deg) = degrees.iter().find(|&&deg| deg > total_degree) {
            return Err(Error::param(alloc::format!(
                "column degree {deg} exceeds the total degree {total_degree}"
            )));
        }
        Ok(Self {
            rows,
            values,
            degrees,
            total_degree,
        })
    }

    /// Builds the matrix from node-major data (one row of `d` values per node).
    pub fn from_rows(
        rows: usize,
        row_major: &[f64],
        degrees: Vec<usize>,
        total_degree: usize,
    ) -> Result<Self> {
        let cols = degrees.len();
        if row_major.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                found: row_major.len(),
            });
        }
        let mut values = vec![0.0; rows * cols];
        for (j, row) in row_major.chunks_exact(cols.max(1)).enumerate().take(rows) {
            for (l, &v) in row.iter().enumerate() {
                values[l * rows + j] = v;
            }
        }
        Self::new(rows, values, degrees, total_degree)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn total_degree(&self) -> usize {
        self.total_degree
    }

    pub fn get(&self, j: usize, l: usize) -> f64 {
        self.values[l * self.rows + j]
    }

    pub fn column(&self, l: usize) -> &[f64] {
        &self.values[l * self.rows..(l + 1) * self.rows]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.rows.max(1)).take(self.cols())
    }

    /// `A c`, skipping zero coefficients.
    pub fn apply(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.cols() {
            return Err(Error::Dimension {
                expected: self.cols(),
                found: coeffs.len(),
            });
        }
        let mut out = vec![0.0; self.rows];
        for (col, &c) in self.columns().zip(coeffs) {
            if c != 0.0 {
                for (o, a) in out.iter_mut().zip(col) {
                    *o += c * a;
                }
            }
        }
        Ok(out)
    }

    /// `AᵀWA` as a dense row-major `d × d` matrix.
    pub fn gram(&self, weights: &[f64]) -> Result<Vec<f64>> {
        if weights.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                found: weights.len(),
            });
        }
        let d = self.cols();
        let mut gram = vec![0.0; d * d];
        let mut weighted = vec![0.0; self.rows];
        for a in 0..d {
            for ((wa, &w), &v) in weighted.iter_mut().zip(weights).zip(self.column(a)) {
                *wa = w * v;
            }
            for b in a..d {
                let s: f64 = weighted
                    .iter()
                    .zip(self.column(b))
                    .map(|(x, y)| x * y)
                    .sum();
                gram[a * d + b] = s;
                gram[b * d + a] = s;
            }
        }
        Ok(gram)
    }

    /// `max |AᵀWA - I|` over all entries.
    pub fn gram_deviation(&self, weights: &[f64]) -> Result<f64> {
        let d = self.cols();
        let gram = self.gram(weights)?;
        Ok(gram
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let target = if k / d == k % d { 1.0 } else { 0.0 };
                math::abs(g - target)
            })
            .fold(0.0, f64::max))
    }
}

/// Built-in orthonormal polynomial families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Normalized Legendre polynomials on `[-1, 1]`, `dx`.
    Legendre,
    /// Ridge polynomials on the unit disc, `(1/π) dx`.
    Ridge,
    /// Real spherical harmonics on `S²`, area measure.
    SphericalHarmonic,
    /// Product Chebyshev polynomials on `[-1, 1]³`, product Chebyshev measure.
    ChebyshevProduct,
}

impl Family {
    /// Dimension `s` of the ambient space of the domain.
    pub fn dim(self) -> usize {
        match self {
            Family::Legendre => 1,
            Family::Ridge => 2,
            Family::SphericalHarmonic | Family::ChebyshevProduct => 3,
        }
    }

    /// `dim P_L` on the family's domain.
    pub fn len(self, degree: usize) -> usize {
        let l = degree;
        match self {
            Family::Legendre => l + 1,
            Family::Ridge => (l + 1) * (l + 2) / 2,
            Family::SphericalHarmonic => (l + 1) * (l + 1),
            Family::ChebyshevProduct => (l + 1) * (l + 2) * (l + 3) / 6,
        }
    }
}

/// A basis family truncated at total degree `L`, evaluable anywhere on its
/// domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis {
    family: Family,
    degree: usize,
}

impl Basis {
    pub fn new(family: Family, degree: usize) -> Result<Self> {
        if family == Family::SphericalHarmonic && degree > sphere::MAX_DEGREE {
            return Err(Error::param(alloc::format!(
                "spherical harmonics are limited to degree {}",
                sphere::MAX_DEGREE
            )));
        }
        Ok(Self { family, degree })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn len(&self) -> usize {
        self.family.len(self.degree)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Polynomial degree of every column, in column order.
    pub fn degrees(&self) -> Vec<usize> {
        let l = self.degree;
        match self.family {
            Family::Legendre => (0..=l).collect(),
            Family::Ridge => (0..=l)
                .flat_map(|m| core::iter::repeat_n(m, m + 1))
                .collect(),
            Family::SphericalHarmonic => (0..=l)
                .flat_map(|n| core::iter::repeat_n(n, 2 * n + 1))
                .collect(),
            Family::ChebyshevProduct => cube::multi_indices(l)
                .iter()
                .map(|m| m[0] + m[1] + m[2])
                .collect(),
        }
    }

    /// Whether `x` lies in the closed domain of the family.
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self.family {
            Family::Legendre => interval::contains(x[0]),
            Family::Ridge => disc::contains(x),
            Family::SphericalHarmonic => sphere::on_sphere(x),
            Family::ChebyshevProduct => cube::contains(x),
        }
    }

    /// Writes `p_ℓ(x)` for every column into `out` (length `d`). The point is
    /// not range-checked.
    pub fn eval_row(&self, x: &[f64], out: &mut [f64]) {
        match self.family {
            Family::Legendre => interval::legendre_row(self.degree, x[0], out),
            Family::Ridge => disc::ridge_row(self.degree, x, out),
            Family::SphericalHarmonic => sphere::harmonic_row(self.degree, x, out),
            Family::ChebyshevProduct => cube::chebyshev_row(self.degree, x, out),
        }
    }

    /// The evaluation matrix at flattened `points`.
    pub fn matrix(&self, points: &[f64]) -> Result<BasisMatrix> {
        let s = self.dim();
        if !points.len().is_multiple_of(s) {
            return Err(Error::Dimension {
                expected: points.len().div_ceil(s) * s,
                found: points.len(),
            });
        }
        let n = points.len() / s;
        let d = self.len();
        let mut values = vec![0.0; n * d];
        let mut row = vec![0.0; d];
        for (j, x) in points.chunks_exact(s).enumerate() {
            if !self.contains(x) {
                return Err(Error::Domain { index: j });
            }
            self.eval_row(x, &mut row);
            for (l, &v) in row.iter().enumerate() {
                values[l * n + j] = v;
            }
        }
        BasisMatrix::new(n, values, self.degrees(), self.degree)
    }
}
