//! A built domain: sampling rule, basis, coefficient path and error
//! estimators.

use rayon::prelude::*;

use hth_core::domains::cube::{
    chebyshev_gauss_tensor_coefficients, chebyshev_gauss_tensor_rule, cube_fast_coefficients,
    cube_rule, cube_weighted_grid,
};
use hth_core::domains::custom::custom_domain;
use hth_core::domains::disc::disc_rule;
use hth_core::domains::interval::gauss_legendre_rule;
use hth_core::domains::sphere::spiral_rule;
use hth_core::{
    Approximant, Basis, BasisMatrix, CoefficientVector, Discretization, Family, QuadratureRule,
};

use crate::config::{DomainKind, DomainSpec};
use crate::error::{HthError, Result};
use crate::formats;

/// Nodes in the independent spherical estimate.
pub const SPHERE_CHECK_POINTS: usize = 10_000;

/// Smallest per-axis size of the independent cube grid.
pub const CUBE_CHECK_AXIS: usize = 41;

const CHUNK: usize = 2048;

pub struct Problem {
    spec: DomainSpec,
    rule: QuadratureRule,
    basis: Option<Basis>,
    /// Dense path; `None` for the cube, which uses separable sums.
    system: Option<Discretization>,
    degrees: Vec<usize>,
}

fn family(kind: DomainKind) -> Option<Family> {
    match kind {
        DomainKind::Interval => Some(Family::Legendre),
        DomainKind::Disc => Some(Family::Ridge),
        DomainKind::Sphere => Some(Family::SphericalHarmonic),
        DomainKind::Cube => Some(Family::ChebyshevProduct),
        DomainKind::Custom => None,
    }
}

impl Problem {
    pub fn build(spec: &DomainSpec) -> Result<Self> {
        let degree = spec.degree();
        let rule = match spec {
            DomainSpec::Interval { points, .. } => gauss_legendre_rule(*points)?,
            DomainSpec::Disc { radial, .. } => disc_rule(*radial)?,
            DomainSpec::Sphere {
                design, strength, ..
            } => formats::load_design(design, *strength)?,
            DomainSpec::Cube { .. } => cube_rule(degree)?,
            DomainSpec::Custom { quadrature, .. } => {
                formats::load_quadrature(quadrature, 2 * degree)?
            }
        };
        if let DomainSpec::Custom { basis, .. } = spec {
            let matrix = formats::load_basis(basis)?;
            if matrix.total_degree() != degree {
                return Err(HthError::config(format!(
                    "basis file has total degree {}, config says {degree}",
                    matrix.total_degree()
                )));
            }
            let degrees = matrix.degrees().to_vec();
            let system = custom_domain(rule.clone(), matrix)?;
            return Ok(Self {
                spec: spec.clone(),
                rule,
                basis: None,
                system: Some(system),
                degrees,
            });
        }
        let basis = Basis::new(family(spec.kind()).expect("built-in domain"), degree)?;
        let system = match spec.kind() {
            DomainKind::Cube => None,
            _ => Some(Discretization::from_family(rule.clone(), &basis)?),
        };
        Ok(Self {
            spec: spec.clone(),
            rule,
            degrees: basis.degrees(),
            basis: Some(basis),
            system,
        })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.spec.degree()
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// The basis family, absent for tabulated custom bases.
    pub fn basis(&self) -> Option<&Basis> {
        self.basis.as_ref()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rule.dim()
    }

    /// The dense discretization, built on demand for the cube.
    pub fn dense_system(&self) -> Result<Discretization> {
        match (&self.system, &self.basis) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(b)) => Ok(Discretization::from_family(self.rule.clone(), b)?),
            (None, None) => unreachable!("custom domains always carry a system"),
        }
    }

    pub fn sample<F: Fn(&[f64]) -> f64>(&self, f: F) -> Vec<f64> {
        self.rule.sample(f)
    }

    /// Plain coefficients `AᵀWf`.
    pub fn coefficients(&self, f_vals: &[f64]) -> Result<CoefficientVector> {
        match &self.system {
            Some(s) => Ok(s.coefficients(f_vals)?),
            None => {
                let degree = self.degree();
                Ok(cube_fast_coefficients(
                    degree,
                    &cube_weighted_grid(degree, f_vals)?,
                )?)
            }
        }
    }

    /// `A c` at the sampling nodes.
    pub fn values_at_nodes(&self, c: &CoefficientVector) -> Result<Vec<f64>> {
        match &self.system {
            Some(s) => Ok(s.values_at_nodes(c)?),
            None => self
                .approximant(c.clone())?
                .evaluate(self.rule.node_data())
                .map_err(Into::into),
        }
    }

    /// An evaluable polynomial; custom domains only have node values.
    pub fn approximant(&self, c: CoefficientVector) -> Result<Approximant> {
        let basis = self.basis.ok_or_else(|| {
            HthError::config("a tabulated basis can only be evaluated at its nodes")
        })?;
        Ok(Approximant::new(basis, c)?)
    }

    /// The pinned error estimator and, where one exists, an independent
    /// second estimate.
    pub fn estimators<F>(&self, f: F) -> Result<(ErrorEstimator, Option<ErrorEstimator>)>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let degree = self.degree();
        match &self.spec {
            DomainSpec::Interval { points, .. } => {
                let rule = gauss_legendre_rule(2 * points)?;
                Ok((self.projected("gauss_legendre_2n", rule, &f)?, None))
            }
            DomainSpec::Disc { radial, .. } => {
                let rule = disc_rule(2 * radial)?;
                Ok((self.projected("disc_rule_2n", rule, &f)?, None))
            }
            DomainSpec::Sphere { .. } => {
                let primary = self.projected("design", self.rule.clone(), &f)?;
                let grid = spiral_rule(SPHERE_CHECK_POINTS)?;
                let basis = self.basis.as_ref().expect("sphere basis");
                let matrix = basis.matrix(grid.node_data())?;
                let f_true = grid.sample(&f);
                let direct = ErrorEstimator::Direct {
                    name: "fibonacci_10000",
                    matrix,
                    weights: grid.weights().to_vec(),
                    f_true,
                };
                Ok((primary, Some(direct)))
            }
            DomainSpec::Cube { .. } => {
                let primary = self.projected("cube_rule", self.rule.clone(), &f)?;
                let m = CUBE_CHECK_AXIS.max(degree + 1);
                let grid = chebyshev_gauss_tensor_rule(m)?;
                let weighted: Vec<f64> = grid
                    .nodes()
                    .zip(grid.weights())
                    .map(|(x, w)| w * f(x))
                    .collect();
                let g = chebyshev_gauss_tensor_coefficients(degree, m, &weighted)?;
                let basis = self.basis.as_ref().expect("cube basis");
                let resid2 = residual_squared(basis, &grid, &f, g.entries());
                Ok((
                    primary,
                    Some(ErrorEstimator::Projected {
                        name: "chebyshev_gauss_tensor",
                        g: g.into_entries(),
                        resid2,
                    }),
                ))
            }
            DomainSpec::Custom { .. } => {
                let system = self.system.as_ref().expect("custom system");
                let f_vals = self.rule.sample(&f);
                let g = system.coefficients(&f_vals)?;
                let p = system.values_at_nodes(&g)?;
                let resid2 = f_vals
                    .iter()
                    .zip(&p)
                    .zip(self.rule.weights())
                    .map(|((f, p), w)| w * (f - p) * (f - p))
                    .sum();
                Ok((
                    ErrorEstimator::Projected {
                        name: "construction_rule",
                        g: g.into_entries(),
                        resid2,
                    },
                    None,
                ))
            }
        }
    }

    fn projected<F>(
        &self,
        name: &'static str,
        rule: QuadratureRule,
        f: &F,
    ) -> Result<ErrorEstimator>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let basis = self.basis.as_ref().expect("built-in basis");
        if rule.exactness() < 2 * self.degree() {
            return Err(HthError::config(format!(
                "evaluation rule {name} is exact to degree {}, below {}",
                rule.exactness(),
                2 * self.degree()
            )));
        }
        let g = match self.spec.kind() {
            DomainKind::Cube if rule.len() == self.rule.len() => {
                self.coefficients(&rule.sample(f))?.into_entries()
            }
            _ => project(basis, &rule, f),
        };
        let resid2 = residual_squared(basis, &rule, f, &g);
        Ok(ErrorEstimator::Projected { name, g, resid2 })
    }
}

/// `Σ w_j f(x_j) p(x_j)` for every basis function, accumulated in fixed
/// chunks so the result does not depend on the thread count.
fn project<F: Fn(&[f64]) -> f64 + Sync>(basis: &Basis, rule: &QuadratureRule, f: &F) -> Vec<f64> {
    let d = basis.len();
    let s = rule.dim();
    let partial: Vec<Vec<f64>> = rule
        .node_data()
        .par_chunks(CHUNK * s)
        .zip(rule.weights().par_chunks(CHUNK))
        .map(|(xs, ws)| {
            let mut acc = vec![0.0; d];
            let mut row = vec![0.0; d];
            for (x, w) in xs.chunks_exact(s).zip(ws) {
                basis.eval_row(x, &mut row);
                let wf = w * f(x);
                for (a, r) in acc.iter_mut().zip(&row) {
                    *a += wf * r;
                }
            }
            acc
        })
        .collect();
    let mut g = vec![0.0; d];
    for p in partial {
        for (a, b) in g.iter_mut().zip(p) {
            *a += b;
        }
    }
    g
}

/// `Σ w_j (f(x_j) - Σ_ℓ g_ℓ p_ℓ(x_j))²`.
fn residual_squared<F: Fn(&[f64]) -> f64 + Sync>(
    basis: &Basis,
    rule: &QuadratureRule,
    f: &F,
    g: &[f64],
) -> f64 {
    let d = basis.len();
    let s = rule.dim();
    let partial: Vec<f64> = rule
        .node_data()
        .par_chunks(CHUNK * s)
        .zip(rule.weights().par_chunks(CHUNK))
        .map(|(xs, ws)| {
            let mut row = vec![0.0; d];
            let mut acc = 0.0;
            for (x, w) in xs.chunks_exact(s).zip(ws) {
                basis.eval_row(x, &mut row);
                let p: f64 = row.iter().zip(g).map(|(r, c)| r * c).sum();
                let e = f(x) - p;
                acc += w * e * e;
            }
            acc
        })
        .collect();
    partial.iter().sum()
}

/// Turns coefficients into an `L₂` error estimate.
pub enum ErrorEstimator {
    /// For a rule exact to degree `2L`: with `g` the coefficients of the
    /// clean function on that rule and `resid2` its squared residual,
    /// `‖p - f‖² = ‖c - g‖² + resid2`.
    Projected {
        name: &'static str,
        g: Vec<f64>,
        resid2: f64,
    },
    /// Direct quadrature of `(p - f)²` with a cached basis matrix.
    Direct {
        name: &'static str,
        matrix: BasisMatrix,
        weights: Vec<f64>,
        f_true: Vec<f64>,
    },
}

impl ErrorEstimator {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Projected { name, .. } | Self::Direct { name, .. } => name,
        }
    }

    pub fn error(&self, c: &CoefficientVector) -> Result<f64> {
        match self {
            Self::Projected { g, resid2, .. } => {
                let d2: f64 = c
                    .entries()
                    .iter()
                    .zip(g)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                Ok((d2 + resid2).sqrt())
            }
            Self::Direct {
                matrix,
                weights,
                f_true,
                ..
            } => {
                let p = matrix.apply(c.entries())?;
                Ok(p.iter()
                    .zip(f_true)
                    .zip(weights)
                    .map(|((p, f), w)| w * (p - f) * (p - f))
                    .sum::<f64>()
                    .sqrt())
            }
        }
    }
}
