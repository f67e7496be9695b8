//! Conformance reports behind the `verify` and `quadcheck` commands.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hth_core::domains::cube::{cube_fast_coefficients, cube_rule, cube_weighted_grid};
use hth_core::domains::sphere::design_residual;
use hth_core::metrics::{theorem_checks, CheckKind};
use hth_core::{Basis, Discretization, Family, GRAM_TOLERANCE};

use crate::config::{DomainKind, DomainSpec};
use crate::problem::Problem;

/// Largest `N · d` for which the dense basis matrix is formed.
pub const DENSE_LIMIT: usize = 50_000_000;

/// Relative tolerance of the monomial moment checks.
pub const MOMENT_TOLERANCE: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Assertion,
    Informational,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub kind: RowKind,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub note: Option<String>,
}

impl CheckRow {
    fn assert(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            kind: RowKind::Assertion,
            passed: residual <= tolerance,
            residual,
            tolerance,
            note: None,
        }
    }

    fn failed(name: impl Into<String>, note: String) -> Self {
        Self {
            name: name.into(),
            kind: RowKind::Assertion,
            passed: false,
            residual: f64::NAN,
            tolerance: 0.0,
            note: Some(note),
        }
    }

    fn skipped(name: impl Into<String>, note: &str) -> Self {
        Self {
            name: name.into(),
            kind: RowKind::Skipped,
            passed: true,
            residual: 0.0,
            tolerance: 0.0,
            note: Some(note.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub title: String,
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.kind != RowKind::Assertion || r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{}\n", self.title);
        let width = self
            .rows
            .iter()
            .map(|r| r.name.len())
            .max()
            .unwrap_or(4)
            .max(5);
        let _ = writeln!(
            out,
            "{:<width$}  {:<6}  {:>12}  {:>10}",
            "check", "status", "residual", "tolerance"
        );
        for r in &self.rows {
            let status = match (r.kind, r.passed) {
                (RowKind::Skipped, _) => "skip",
                (RowKind::Informational, _) => "info",
                (_, true) => "pass",
                (_, false) => "FAIL",
            };
            let _ = write!(
                out,
                "{:<width$}  {:<6}  {:>12.3e}  {:>10.1e}",
                r.name, status, r.residual, r.tolerance
            );
            if let Some(n) = &r.note {
                let _ = write!(out, "  {n}");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{}",
            if self.passed() {
                "all checks passed"
            } else {
                "some checks FAILED"
            }
        );
        out
    }
}

fn describe(spec: &DomainSpec) -> String {
    format!("{} domain, degree {}", spec.kind().name(), spec.degree())
}

/// Gram identity, design integrity, polynomial reproduction, the structural
/// identities of hard thresholding on random data, and for the cube the
/// agreement of the separable and dense coefficient paths.
pub fn verify(spec: &DomainSpec, seed: u64) -> CheckReport {
    let mut rows = Vec::new();
    let title = format!("verify: {}", describe(spec));
    let problem = match Problem::build(spec) {
        Ok(p) => p,
        Err(e) => {
            rows.push(CheckRow::failed("build", e.to_string()));
            return CheckReport { title, rows };
        }
    };
    let rule = problem.rule();
    rows.push(CheckRow::assert(
        "volume",
        (rule.weights().iter().sum::<f64>() - rule.volume()).abs(),
        1e-12 * rule.volume(),
    ));
    if let DomainSpec::Sphere { strength, .. } = spec {
        let (_, r) = design_residual(rule, *strength);
        rows.push(CheckRow::assert(
            "design_integrity",
            r,
            hth_core::domains::sphere::DESIGN_TOLERANCE,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dense_ok = rule.len() * problem.len() <= DENSE_LIMIT;
    let system = if dense_ok {
        match problem.dense_system() {
            Ok(s) => Some(s),
            Err(e) => {
                rows.push(CheckRow::failed("gram_identity", e.to_string()));
                None
            }
        }
    } else {
        rows.push(CheckRow::skipped("gram_identity", "dense matrix too large"));
        None
    };

    if let Some(system) = &system {
        rows.push(CheckRow::assert(
            "gram_identity",
            system.gram_deviation(),
            GRAM_TOLERANCE,
        ));
        rows.push(reproduction(system, &mut rng));
        let f: Vec<f64> = (0..rule.len())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        identity_rows(&mut rows, system, &f);
    } else {
        rows.push(CheckRow::skipped(
            "polynomial_reproduction",
            "dense matrix too large",
        ));
    }

    if spec.kind() == DomainKind::Cube {
        let degree = if dense_ok { spec.degree() } else { 6 };
        rows.push(cube_dual_path(degree, &mut rng));
    }
    CheckReport { title, rows }
}

fn reproduction(system: &Discretization, rng: &mut ChaCha8Rng) -> CheckRow {
    let c: Vec<f64> = (0..system.basis().cols())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let result = system
        .basis()
        .apply(&c)
        .and_then(|f| system.coefficients(&f));
    match result {
        Ok(alpha) => {
            let dev = alpha
                .entries()
                .iter()
                .zip(&c)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            CheckRow::assert("polynomial_reproduction", dev, 1e-10)
        }
        Err(e) => CheckRow::failed("polynomial_reproduction", e.to_string()),
    }
}

fn identity_rows(rows: &mut Vec<CheckRow>, system: &Discretization, f: &[f64]) {
    let alpha = match system.coefficients(f) {
        Ok(a) => a,
        Err(e) => {
            rows.push(CheckRow::failed("identities", e.to_string()));
            return;
        }
    };
    let mut mags: Vec<f64> = alpha.entries().iter().map(|a| a.abs()).collect();
    mags.sort_by(f64::total_cmp);
    // midway between two magnitudes so no coefficient sits on the threshold
    let mid = mags.len() / 2;
    let median = if mid > 0 {
        0.5 * (mags[mid - 1] + mags[mid])
    } else {
        mags[0]
    };
    for (label, lambda) in [
        ("zero", 0.0),
        ("median", median),
        ("above_max", 2.0 * alpha.max_abs()),
    ] {
        match theorem_checks(system, f, lambda) {
            Ok(report) => {
                for c in report.checks {
                    rows.push(CheckRow {
                        name: format!("{}@lambda_{label}", c.name),
                        kind: match c.kind {
                            CheckKind::Assertion => RowKind::Assertion,
                            CheckKind::Informational => RowKind::Informational,
                            CheckKind::Skipped => RowKind::Skipped,
                        },
                        passed: c.passed,
                        residual: c.residual,
                        tolerance: c.tolerance,
                        note: None,
                    });
                }
            }
            Err(e) => rows.push(CheckRow::failed(
                format!("identities@lambda_{label}"),
                e.to_string(),
            )),
        }
    }
}

fn cube_dual_path(degree: usize, rng: &mut ChaCha8Rng) -> CheckRow {
    let name = format!("cube_fast_vs_dense_L{degree}");
    let mut run = || -> hth_core::Result<f64> {
        let rule = cube_rule(degree)?;
        let f: Vec<f64> = (0..rule.len())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let system =
            Discretization::from_family(rule, &Basis::new(Family::ChebyshevProduct, degree)?)?;
        let dense = system.coefficients(&f)?;
        let fast = cube_fast_coefficients(degree, &cube_weighted_grid(degree, &f)?)?;
        Ok(dense
            .entries()
            .iter()
            .zip(fast.entries())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    };
    match run() {
        Ok(dev) => CheckRow::assert(name, dev, 1e-9),
        Err(e) => CheckRow::failed(name, e.to_string()),
    }
}

fn double_factorial(n: i64) -> f64 {
    let mut out = 1.0;
    let mut k = n;
    while k > 1 {
        out *= k as f64;
        k -= 2;
    }
    out
}

/// `(1/π) ∫_disc x^a y^b dx`.
pub fn disc_moment(a: usize, b: usize) -> f64 {
    if a % 2 == 1 || b % 2 == 1 {
        return 0.0;
    }
    let (a, b) = (a as i64, b as i64);
    2.0 * double_factorial(a - 1) * double_factorial(b - 1)
        / ((a + b + 2) as f64 * double_factorial(a + b))
}

/// `(1/π) ∫ x^k (1 - x²)^{-1/2} dx` over `[-1, 1]`.
pub fn chebyshev_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        double_factorial(k as i64 - 1) / double_factorial(k as i64)
    }
}

fn moment_row(name: &str, worst: f64) -> CheckRow {
    CheckRow::assert(name, worst, MOMENT_TOLERANCE)
}

/// Relative error of the rule on monomials with known integrals, up to its
/// declared exactness (capped to keep the reference values representable).
pub fn quadcheck(spec: &DomainSpec) -> CheckReport {
    let title = format!("quadcheck: {}", describe(spec));
    let mut rows = Vec::new();
    let problem = match Problem::build(spec) {
        Ok(p) => p,
        Err(e) => {
            rows.push(CheckRow::failed("build", e.to_string()));
            return CheckReport { title, rows };
        }
    };
    let rule = problem.rule();
    let t = rule.exactness();
    rows.push(CheckRow::assert(
        "volume",
        (rule.weights().iter().sum::<f64>() - rule.volume()).abs() / rule.volume(),
        1e-12,
    ));
    let rel = |got: f64, exact: f64, scale: f64| (got - exact).abs() / exact.abs().max(scale);
    match spec.kind() {
        DomainKind::Interval => {
            let mut worst: f64 = 0.0;
            for k in 0..=t.min(60) {
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k + 1) as f64
                };
                let got = rule.integrate(|x| x[0].powi(k as i32));
                worst = worst.max(rel(got, exact, 1.0));
            }
            rows.push(moment_row(
                &format!("monomials_to_degree_{}", t.min(60)),
                worst,
            ));
        }
        DomainKind::Disc => {
            let top = t.min(40);
            let mut worst: f64 = 0.0;
            for a in 0..=top {
                for b in 0..=top - a {
                    let got = rule.integrate(|x| x[0].powi(a as i32) * x[1].powi(b as i32));
                    worst = worst.max(rel(got, disc_moment(a, b), 1.0));
                }
            }
            rows.push(moment_row(&format!("monomials_to_degree_{top}"), worst));
        }
        DomainKind::Cube => {
            let top = t.min(24);
            let mut worst: f64 = 0.0;
            for a in 0..=top {
                for b in 0..=top - a {
                    for c in 0..=top - a - b {
                        let exact = chebyshev_moment(a) * chebyshev_moment(b) * chebyshev_moment(c);
                        let got = rule.integrate(|x| {
                            x[0].powi(a as i32) * x[1].powi(b as i32) * x[2].powi(c as i32)
                        });
                        worst = worst.max(rel(got, exact, 1.0));
                    }
                }
            }
            rows.push(moment_row(&format!("monomials_to_degree_{top}"), worst));
        }
        DomainKind::Sphere => {
            let (_, r) = design_residual(rule, t);
            rows.push(CheckRow::assert(
                format!("harmonics_to_degree_{t}"),
                r,
                hth_core::domains::sphere::DESIGN_TOLERANCE,
            ));
            let got = rule.integrate(|x| x[2] * x[2]);
            let exact = 4.0 * std::f64::consts::PI / 3.0;
            rows.push(moment_row("second_moment", rel(got, exact, 1.0)));
        }
        DomainKind::Custom => match problem.dense_system() {
            Ok(s) => rows.push(CheckRow::assert(
                "basis_products",
                s.gram_deviation(),
                GRAM_TOLERANCE,
            )),
            Err(e) => rows.push(CheckRow::failed("basis_products", e.to_string())),
        },
    }
    CheckReport { title, rows }
}
