//! Experiment description, read from a flat TOML file.
//!
//! ```toml
//! domain = "interval"
//! degree = 250
//! points = 300
//! function = "interval_tab"
//! noise = "gaussian"
//! sigma = [0.2]
//! methods = ["filtered", "lasso", "hard"]
//! lambda_log10 = [-1.35, -1.25, -1.15, -1.05]
//! trials = 20
//! seed = 1
//! ```
//!
//! Relative paths are resolved against the directory of the file.

use std::fmt;
use std::path::{Path, PathBuf};

use hth_core::noise::NoiseKind;
use serde::{Deserialize, Serialize};

use crate::error::{HthError, Result};
use crate::functions::BuiltinFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Interval,
    Disc,
    Sphere,
    Cube,
    Custom,
}

impl DomainKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Interval => "interval",
            Self::Disc => "disc",
            Self::Sphere => "sphere",
            Self::Cube => "cube",
            Self::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Plain,
    Filtered,
    Lasso,
    Hard,
}

impl Method {
    pub const ALL: [Method; 4] = [Self::Plain, Self::Filtered, Self::Lasso, Self::Hard];

    pub fn name(self) -> &'static str {
        match self {
            Self::Plain => "plain",
            Self::Filtered => "filtered",
            Self::Lasso => "lasso",
            Self::Hard => "hard",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    #[default]
    None,
    Gaussian,
    Impulse,
    Mixed,
}

/// Which samples receive noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSupport {
    #[default]
    All,
    /// Only samples where the clean function is nonzero.
    Nonzero,
}

/// Where the nodes and basis of an experiment come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Interval {
        degree: usize,
        points: usize,
    },
    Disc {
        degree: usize,
        radial: usize,
    },
    Sphere {
        degree: usize,
        design: PathBuf,
        strength: usize,
    },
    Cube {
        degree: usize,
    },
    Custom {
        degree: usize,
        quadrature: PathBuf,
        basis: PathBuf,
    },
}

impl DomainSpec {
    pub fn kind(&self) -> DomainKind {
        match self {
            Self::Interval { .. } => DomainKind::Interval,
            Self::Disc { .. } => DomainKind::Disc,
            Self::Sphere { .. } => DomainKind::Sphere,
            Self::Cube { .. } => DomainKind::Cube,
            Self::Custom { .. } => DomainKind::Custom,
        }
    }

    pub fn degree(&self) -> usize {
        match *self {
            Self::Interval { degree, .. }
            | Self::Disc { degree, .. }
            | Self::Sphere { degree, .. }
            | Self::Cube { degree }
            | Self::Custom { degree, .. } => degree,
        }
    }

    pub fn with_degree(mut self, new: usize) -> Self {
        match &mut self {
            Self::Interval { degree, .. }
            | Self::Disc { degree, .. }
            | Self::Sphere { degree, .. }
            | Self::Cube { degree }
            | Self::Custom { degree, .. } => *degree = new,
        }
        self
    }
}

fn default_methods() -> Vec<Method> {
    vec![Method::Filtered, Method::Lasso, Method::Hard]
}

fn default_trials() -> usize {
    20
}

fn default_lambda() -> Vec<f64> {
    vec![f64::NEG_INFINITY]
}

/// The file contents, field for field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainKind,
    pub degree: usize,
    /// Gauss–Legendre nodes (interval).
    pub points: Option<usize>,
    /// Radial parameter of the polar rule (disc).
    pub radial: Option<usize>,
    /// Design file (sphere).
    pub design: Option<PathBuf>,
    /// Design strength; defaults to `2 * degree`.
    pub strength: Option<usize>,
    /// Quadrature file (custom).
    pub quadrature: Option<PathBuf>,
    /// Basis file (custom).
    pub basis: Option<PathBuf>,
    pub function: BuiltinFunction,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub sigma: Vec<f64>,
    #[serde(default)]
    pub amplitude: Vec<f64>,
    #[serde(default)]
    pub noise_support: NoiseSupport,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    /// `log10 λ` grid; `-inf` stands for `λ = 0`.
    #[serde(default = "default_lambda")]
    pub lambda_log10: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub output_csv: Option<PathBuf>,
    pub output_json: Option<PathBuf>,
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| HthError::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `path` and resolves relative file references against its
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HthError::io(path, e))?;
        let mut cfg =
            Self::parse(&text).map_err(|e| HthError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut cfg.design,
            &mut cfg.quadrature,
            &mut cfg.basis,
            &mut cfg.output_csv,
            &mut cfg.output_json,
        ] {
            resolve(base, p);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(HthError::config("degree must be at least 1"));
        }
        if self.trials == 0 {
            return Err(HthError::config("trials must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(HthError::config("at least one method is required"));
        }
        if self.lambda_log10.is_empty() {
            return Err(HthError::config("lambda_log10 must not be empty"));
        }
        if let Some(l) = self
            .lambda_log10
            .iter()
            .find(|l| l.is_nan() || **l == f64::INFINITY)
        {
            return Err(HthError::config(format!("invalid lambda_log10 entry {l}")));
        }
        for (name, values) in [("sigma", &self.sigma), ("amplitude", &self.amplitude)] {
            if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(HthError::config(format!(
                    "{name} entries must be positive, got {v}"
                )));
            }
        }
        let need = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(HthError::config(msg))
            }
        };
        match self.noise {
            NoiseModel::None => need(
                self.sigma.is_empty() && self.amplitude.is_empty(),
                "noise = \"none\" takes no sigma or amplitude",
            )?,
            NoiseModel::Gaussian => need(
                !self.sigma.is_empty() && self.amplitude.is_empty(),
                "gaussian noise needs sigma and no amplitude",
            )?,
            NoiseModel::Impulse => need(
                self.sigma.is_empty() && !self.amplitude.is_empty(),
                "impulse noise needs amplitude and no sigma",
            )?,
            NoiseModel::Mixed => need(
                !self.sigma.is_empty() && !self.amplitude.is_empty(),
                "mixed noise needs sigma and amplitude",
            )?,
        }
        self.domain_spec().map(|_| ())
    }

    pub fn domain_spec(&self) -> Result<DomainSpec> {
        let degree = self.degree;
        let missing =
            |key: &str| HthError::config(format!("domain {} needs `{key}`", self.domain.name()));
        let spec = match self.domain {
            DomainKind::Interval => DomainSpec::Interval {
                degree,
                points: self.points.ok_or_else(|| missing("points"))?,
            },
            DomainKind::Disc => DomainSpec::Disc {
                degree,
                radial: self.radial.ok_or_else(|| missing("radial"))?,
            },
            DomainKind::Sphere => DomainSpec::Sphere {
                degree,
                design: self.design.clone().ok_or_else(|| missing("design"))?,
                strength: self.strength.unwrap_or(2 * degree),
            },
            DomainKind::Cube => DomainSpec::Cube { degree },
            DomainKind::Custom => DomainSpec::Custom {
                degree,
                quadrature: self
                    .quadrature
                    .clone()
                    .ok_or_else(|| missing("quadrature"))?,
                basis: self.basis.clone().ok_or_else(|| missing("basis"))?,
            },
        };
        let dim = match self.domain {
            DomainKind::Interval => Some(1),
            DomainKind::Disc => Some(2),
            DomainKind::Sphere | DomainKind::Cube => Some(3),
            DomainKind::Custom => None,
        };
        if let Some(dim) = dim {
            if dim != self.function.dim() {
                return Err(HthError::config(format!(
                    "function {} is not defined on the {}",
                    self.function,
                    self.domain.name()
                )));
            }
        }
        Ok(spec)
    }

    /// Noise levels in grid order; a mixed model sweeps `sigma` in the outer
    /// loop.
    pub fn noise_levels(&self) -> Vec<Option<NoiseKind>> {
        match self.noise {
            NoiseModel::None => vec![None],
            NoiseModel::Gaussian => self
                .sigma
                .iter()
                .map(|&sigma| Some(NoiseKind::Gaussian { sigma }))
                .collect(),
            NoiseModel::Impulse => self
                .amplitude
                .iter()
                .map(|&amplitude| Some(NoiseKind::Impulse { amplitude }))
                .collect(),
            NoiseModel::Mixed => self
                .sigma
                .iter()
                .flat_map(|&sigma| {
                    self.amplitude
                        .iter()
                        .map(move |&amplitude| Some(NoiseKind::Mixed { sigma, amplitude }))
                })
                .collect(),
        }
    }

    /// `λ` for every grid entry.
    pub fn lambdas(&self) -> Vec<f64> {
        self.lambda_log10.iter().map(|l| 10f64.powf(*l)).collect()
    }
}

/// The number reported in the `noise_param` column: `σ` for Gaussian and
/// mixed noise, `a` for impulse noise, 0 without noise.
pub fn noise_param(level: Option<NoiseKind>) -> f64 {
    match level {
        None => 0.0,
        Some(NoiseKind::Gaussian { sigma }) | Some(NoiseKind::Mixed { sigma, .. }) => sigma,
        Some(NoiseKind::Impulse { amplitude }) => amplitude,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
domain = "interval"
degree = 10
points = 20
function = "interval_osc"
noise = "gaussian"
sigma = [0.1, 0.2]
lambda_log10 = [-2.0, -1.0]
"#;

    #[test]
    fn defaults_and_grid() {
        let cfg = ExperimentConfig::parse(BASE).unwrap();
        assert_eq!(cfg.trials, 20);
        assert_eq!(
            cfg.methods,
            vec![Method::Filtered, Method::Lasso, Method::Hard]
        );
        assert_eq!(cfg.noise_levels().len(), 2);
        assert!((cfg.lambdas()[1] - 0.1).abs() < 1e-15);
        assert_eq!(
            cfg.domain_spec().unwrap(),
            DomainSpec::Interval {
                degree: 10,
                points: 20
            }
        );
    }

    #[test]
    fn rejects_bad_input() {
        for (from, to) in [
            ("points = 20\n", ""),
            ("sigma = [0.1, 0.2]", "sigma = [-0.1]"),
            ("sigma = [0.1, 0.2]", ""),
            ("function = \"interval_osc\"", "function = \"cube_exp\""),
            ("degree = 10", "degree = 10\nbogus = 1"),
            ("lambda_log10 = [-2.0, -1.0]", "lambda_log10 = []"),
        ] {
            let text = BASE.replace(from, to);
            assert!(ExperimentConfig::parse(&text).is_err(), "{to}");
        }
        let text = format!("{BASE}trials = 0\n");
        assert!(ExperimentConfig::parse(&text).is_err());
    }

    #[test]
    fn zero_lambda_and_mixed_levels() {
        let text = BASE
            .replace("lambda_log10 = [-2.0, -1.0]", "lambda_log10 = [-inf]")
            .replace(
                "noise = \"gaussian\"",
                "noise = \"mixed\"\namplitude = [0.5]",
            );
        let cfg = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(cfg.lambdas(), vec![0.0]);
        let levels = cfg.noise_levels();
        assert_eq!(levels.len(), 2);
        assert_eq!(noise_param(levels[1]), 0.2);
    }

    #[test]
    fn relative_paths_follow_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        let text = r#"
domain = "sphere"
degree = 2
design = "designs/x.txt"
function = "sphere_wendland"
output_csv = "out.csv"
"#;
        std::fs::write(&path, text).unwrap();
        let cfg = ExperimentConfig::load(&path).unwrap();
        assert_eq!(cfg.design.unwrap(), dir.path().join("designs/x.txt"));
        assert_eq!(cfg.output_csv.unwrap(), dir.path().join("out.csv"));
        assert_eq!(cfg.strength, None);
    }
}
