//! Repeated noisy trials over a grid of noise levels and `λ` values.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use hth_core::noise::{derive_seed, sample_noise, NoiseKind, NoiseSpec};
use hth_core::{apply_threshold, CoefficientVector, Scheme};

use crate::config::{noise_param, DomainSpec, ExperimentConfig, Method, NoiseSupport};
use crate::error::{HthError, Result};
use crate::functions::BuiltinFunction;
use crate::problem::{ErrorEstimator, Problem};

pub const CSV_HEADER: [&str; 6] = [
    "method",
    "lambda_log10",
    "noise_param",
    "mean_l2",
    "std_l2",
    "mean_sparsity",
];

/// One `(noise level, λ, method)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub method: Method,
    pub lambda_log10: f64,
    pub lambda: f64,
    pub noise_param: f64,
    pub sigma: Option<f64>,
    pub amplitude: Option<f64>,
    pub mean_l2: f64,
    pub std_l2: f64,
    /// Mean `‖c‖₀` of the method's coefficients.
    pub mean_sparsity: f64,
    pub mean_l2_independent: Option<f64>,
    pub std_l2_independent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub domain: DomainSpec,
    pub function: BuiltinFunction,
    pub nodes: usize,
    pub dimension: usize,
    pub trials: usize,
    pub seed: u64,
    pub estimator: String,
    pub independent_estimator: Option<String>,
    pub rows: Vec<CellResult>,
}

/// Noise of `level` for trial seed `seed`. All levels share the seed, so a
/// sweep reuses the same underlying draws at different scales.
pub fn trial_noise(level: Option<NoiseKind>, seed: u64, n: usize) -> Result<Vec<f64>> {
    match level {
        None => Ok(vec![0.0; n]),
        Some(kind) => Ok(sample_noise(&NoiseSpec::new(kind, seed)?, n)?),
    }
}

/// Adds noise, leaving samples untouched where `support` excludes them.
pub fn perturb(clean: &[f64], noise: &[f64], support: NoiseSupport) -> Vec<f64> {
    clean
        .iter()
        .zip(noise)
        .map(|(f, e)| match support {
            NoiseSupport::Nonzero if *f == 0.0 => 0.0,
            _ => f + e,
        })
        .collect()
}

pub fn scheme(method: Method, lambda: f64, degree: usize) -> Scheme {
    match method {
        Method::Plain => Scheme::Plain,
        Method::Filtered => Scheme::Filtered { degree },
        Method::Lasso => Scheme::Lasso { lambda, mu: None },
        Method::Hard => Scheme::Hard { lambda },
    }
}

pub fn method_coefficients(
    problem: &Problem,
    alpha: &CoefficientVector,
    method: Method,
    lambda: f64,
) -> Result<CoefficientVector> {
    let s = scheme(method, lambda, problem.degree().max(1));
    Ok(apply_threshold(alpha, &s, problem.degrees())?)
}

struct Sample {
    l2: f64,
    independent: Option<f64>,
    nnz: usize,
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = if n > 1.0 {
        values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Runs every trial of `cfg`. Trials run in parallel; each draws its noise
/// from `derive_seed(seed, trial)`, and results are aggregated in trial
/// order, so the report does not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let problem = Problem::build(&cfg.domain_spec()?)?;
    if problem.dim() != cfg.function.dim() {
        return Err(HthError::config(format!(
            "function {} expects {}-dimensional points, the domain has {}",
            cfg.function,
            cfg.function.dim(),
            problem.dim()
        )));
    }
    let f = cfg.function;
    let (estimator, independent) = problem.estimators(|x| f.eval(x))?;
    let clean = problem.sample(|x| f.eval(x));
    let levels = cfg.noise_levels();
    let lambdas = cfg.lambdas();

    let samples: Vec<Vec<Sample>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            run_trial(
                &problem,
                &estimator,
                independent.as_ref(),
                &clean,
                cfg,
                &levels,
                &lambdas,
                derive_seed(cfg.seed, t),
            )
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut cell = 0;
    for level in &levels {
        let (sigma, amplitude) = match level {
            None => (None, None),
            Some(NoiseKind::Gaussian { sigma }) => (Some(*sigma), None),
            Some(NoiseKind::Impulse { amplitude }) => (None, Some(*amplitude)),
            Some(NoiseKind::Mixed { sigma, amplitude }) => (Some(*sigma), Some(*amplitude)),
        };
        for (&lambda_log10, &lambda) in cfg.lambda_log10.iter().zip(&lambdas) {
            for &method in &cfg.methods {
                let l2 = samples.iter().map(|s| s[cell].l2);
                let (mean_l2, std_l2) = mean_std(l2);
                let (mean_ind, std_ind) = if independent.is_some() {
                    let (m, s) = mean_std(samples.iter().map(|s| s[cell].independent.unwrap()));
                    (Some(m), Some(s))
                } else {
                    (None, None)
                };
                let mean_sparsity =
                    samples.iter().map(|s| s[cell].nnz as f64).sum::<f64>() / cfg.trials as f64;
                rows.push(CellResult {
                    method,
                    lambda_log10,
                    lambda,
                    noise_param: noise_param(*level),
                    sigma,
                    amplitude,
                    mean_l2,
                    std_l2,
                    mean_sparsity,
                    mean_l2_independent: mean_ind,
                    std_l2_independent: std_ind,
                });
                cell += 1;
            }
        }
    }

    Ok(ExperimentReport {
        domain: problem.spec().clone(),
        function: cfg.function,
        nodes: problem.rule().len(),
        dimension: problem.len(),
        trials: cfg.trials,
        seed: cfg.seed,
        estimator: estimator.name().to_string(),
        independent_estimator: independent.map(|e| e.name().to_string()),
        rows,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_trial(
    problem: &Problem,
    estimator: &ErrorEstimator,
    independent: Option<&ErrorEstimator>,
    clean: &[f64],
    cfg: &ExperimentConfig,
    levels: &[Option<NoiseKind>],
    lambdas: &[f64],
    seed: u64,
) -> Result<Vec<Sample>> {
    let mut out = Vec::with_capacity(levels.len() * lambdas.len() * cfg.methods.len());
    for level in levels {
        let noise = trial_noise(*level, seed, clean.len())?;
        let noisy = perturb(clean, &noise, cfg.noise_support);
        let alpha = problem.coefficients(&noisy)?;
        for &lambda in lambdas {
            for &method in &cfg.methods {
                let c = method_coefficients(problem, &alpha, method, lambda)?;
                out.push(Sample {
                    l2: estimator.error(&c)?,
                    independent: independent.map(|e| e.error(&c)).transpose()?,
                    nnz: c.nnz(),
                });
            }
        }
    }
    Ok(out)
}

impl ExperimentReport {
    /// The six-column table.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.method.name().to_string(),
                r.lambda_log10.to_string(),
                r.noise_param.to_string(),
                r.mean_l2.to_string(),
                r.std_l2.to_string(),
                r.mean_sparsity.to_string(),
            ])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| HthError::config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?).map_err(|e| HthError::io(path, e))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| HthError::io(path, e))
    }

    /// The row for `(method, λ index, noise index)` in grid order.
    pub fn find(&self, method: Method, lambda_log10: f64, noise_param: f64) -> Option<&CellResult> {
        self.rows.iter().find(|r| {
            r.method == method && r.lambda_log10 == lambda_log10 && r.noise_param == noise_param
        })
    }
}
