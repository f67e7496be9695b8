//! Columnar samples of the clean function, the noisy data and each fitted
//! polynomial on a plotting grid.

use std::f64::consts::PI;
use std::path::Path;
use std::str::FromStr;

use hth_core::noise::derive_seed;
use hth_core::CoefficientVector;

use crate::config::{DomainKind, ExperimentConfig, Method};
use crate::error::{HthError, Result};
use crate::experiment::{method_coefficients, perturb, trial_noise};
use crate::problem::Problem;

/// Trial index whose seed drives the noise drawn on a plotting grid.
const GRID_NOISE_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// `linspace:N`, `N` equispaced points on `[-1, 1]`.
    Linspace(usize),
    /// `polar:NR:NT`, radii `0..=1` times `NT` equispaced angles.
    Polar(usize, usize),
    /// `latlon:NLAT:NLON`, colatitudes `0..=π` times `NLON` longitudes.
    LatLon(usize, usize),
    /// `slice:x=c:N`, an `N × N` grid on a coordinate plane of the cube.
    Slice { axis: usize, value: f64, n: usize },
    /// The sampling nodes themselves.
    Nodes,
}

fn count(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse::<usize>().ok())
        .filter(|n| *n >= 1)
        .ok_or_else(|| HthError::config(format!("grid: bad {what}")))
}

impl FromStr for GridSpec {
    type Err = HthError;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or("");
        let spec = match head {
            "linspace" => Self::Linspace(count(parts.next(), "point count")?),
            "polar" => Self::Polar(
                count(parts.next(), "radius count")?,
                count(parts.next(), "angle count")?,
            ),
            "latlon" => Self::LatLon(
                count(parts.next(), "latitude count")?,
                count(parts.next(), "longitude count")?,
            ),
            "slice" => {
                let plane = parts.next().unwrap_or("");
                let (name, value) = plane
                    .split_once('=')
                    .ok_or_else(|| HthError::config("grid: slice needs axis=value"))?;
                let axis = match name {
                    "x" => 0,
                    "y" => 1,
                    "z" => 2,
                    _ => return Err(HthError::config(format!("grid: unknown axis {name:?}"))),
                };
                let value = value
                    .parse::<f64>()
                    .map_err(|_| HthError::config(format!("grid: bad slice value {value:?}")))?;
                Self::Slice {
                    axis,
                    value,
                    n: count(parts.next(), "slice resolution")?,
                }
            }
            "nodes" => Self::Nodes,
            _ => return Err(HthError::config(format!("unknown grid {s:?}"))),
        };
        if parts.next().is_some() {
            return Err(HthError::config(format!("grid: trailing fields in {s:?}")));
        }
        Ok(spec)
    }
}

fn spaced(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if n == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

impl GridSpec {
    fn domain(&self) -> Option<DomainKind> {
        match self {
            Self::Linspace(_) => Some(DomainKind::Interval),
            Self::Polar(..) => Some(DomainKind::Disc),
            Self::LatLon(..) => Some(DomainKind::Sphere),
            Self::Slice { .. } => Some(DomainKind::Cube),
            Self::Nodes => None,
        }
    }

    /// Flattened grid points.
    pub fn points(&self, problem: &Problem) -> Result<Vec<f64>> {
        if let Some(kind) = self.domain() {
            if kind != problem.spec().kind() {
                return Err(HthError::config(format!(
                    "grid does not fit the {} domain",
                    problem.spec().kind().name()
                )));
            }
        }
        Ok(match *self {
            Self::Linspace(n) => spaced(n, -1.0, 1.0).collect(),
            Self::Polar(nr, nt) => spaced(nr, 0.0, 1.0)
                .flat_map(|r| {
                    (0..nt).flat_map(move |k| {
                        let t = 2.0 * PI * k as f64 / nt as f64;
                        [r * t.cos(), r * t.sin()]
                    })
                })
                .collect(),
            Self::LatLon(nlat, nlon) => spaced(nlat, 0.0, PI)
                .flat_map(|th| {
                    (0..nlon).flat_map(move |k| {
                        let ph = 2.0 * PI * k as f64 / nlon as f64;
                        [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]
                    })
                })
                .collect(),
            Self::Slice { axis, value, n } => {
                let mut out = Vec::with_capacity(3 * n * n);
                for a in spaced(n, -1.0, 1.0) {
                    for b in spaced(n, -1.0, 1.0) {
                        let mut p = [a, b, 0.0];
                        p.copy_within(axis..2, axis + 1);
                        p[axis] = value;
                        out.extend_from_slice(&p);
                    }
                }
                out
            }
            Self::Nodes => problem.rule().node_data().to_vec(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl PlotData {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| HthError::config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?).map_err(|e| HthError::io(path, e))
    }
}

/// Plot table for one trial of `cfg` at its first noise level and first `λ`.
///
/// On the `nodes` grid the noisy column holds the data the fit used; on
/// other grids it is the clean function plus fresh noise of the same model.
pub fn emit_plot_data(cfg: &ExperimentConfig, grid: &GridSpec, seed: u64) -> Result<PlotData> {
    let problem = Problem::build(&cfg.domain_spec()?)?;
    let f = cfg.function;
    let level = cfg.noise_levels()[0];
    let lambda = cfg.lambdas()[0];

    let clean = problem.sample(|x| f.eval(x));
    let trial_seed = derive_seed(seed, 0);
    let noisy = perturb(
        &clean,
        &trial_noise(level, trial_seed, clean.len())?,
        cfg.noise_support,
    );
    let alpha = problem.coefficients(&noisy)?;
    let fits: Vec<(Method, CoefficientVector)> = cfg
        .methods
        .iter()
        .map(|&m| Ok((m, method_coefficients(&problem, &alpha, m, lambda)?)))
        .collect::<Result<_>>()?;

    let points = grid.points(&problem)?;
    let s = problem.dim();
    let n = points.len() / s;
    let f_clean: Vec<f64> = points.chunks_exact(s).map(|x| f.eval(x)).collect();
    let f_noisy = if *grid == GridSpec::Nodes {
        noisy
    } else {
        let eps = trial_noise(level, derive_seed(seed, GRID_NOISE_STREAM), n)?;
        perturb(&f_clean, &eps, cfg.noise_support)
    };
    let mut columns = Vec::new();
    for (_, c) in &fits {
        columns.push(if *grid == GridSpec::Nodes {
            problem.values_at_nodes(c)?
        } else {
            problem.approximant(c.clone())?.evaluate(&points)?
        });
    }

    let mut header: Vec<String> = match s {
        1 => vec!["x".into()],
        2 => vec!["x1".into(), "x2".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=s).map(|i| format!("x{i}")).collect(),
    };
    header.push("f_clean".into());
    header.push("f_noisy".into());
    header.extend(fits.iter().map(|(m, _)| m.name().to_string()));

    let rows = (0..n)
        .map(|j| {
            let mut row = points[j * s..(j + 1) * s].to_vec();
            row.push(f_clean[j]);
            row.push(f_noisy[j]);
            row.extend(columns.iter().map(|c| c[j]));
            row
        })
        .collect();
    Ok(PlotData { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DomainSpec;

    #[test]
    fn parses_grid_specs() {
        assert_eq!(
            "linspace:1001".parse::<GridSpec>().unwrap(),
            GridSpec::Linspace(1001)
        );
        assert_eq!(
            "polar:10:20".parse::<GridSpec>().unwrap(),
            GridSpec::Polar(10, 20)
        );
        assert_eq!(
            "slice:z=0:5".parse::<GridSpec>().unwrap(),
            GridSpec::Slice {
                axis: 2,
                value: 0.0,
                n: 5
            }
        );
        for bad in [
            "linspace",
            "linspace:0",
            "polar:3",
            "slice:w=1:3",
            "mesh:4",
            "nodes:2",
        ] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn slice_keeps_the_fixed_coordinate() {
        let problem = Problem::build(&DomainSpec::Cube { degree: 2 }).unwrap();
        let grid = GridSpec::Slice {
            axis: 2,
            value: 0.0,
            n: 4,
        };
        let pts = grid.points(&problem).unwrap();
        assert_eq!(pts.len(), 48);
        assert!(pts.chunks_exact(3).all(|p| p[2] == 0.0));
        let grid = GridSpec::Slice {
            axis: 0,
            value: -0.25,
            n: 3,
        };
        assert!(grid
            .points(&problem)
            .unwrap()
            .chunks_exact(3)
            .all(|p| p[0] == -0.25));
        assert!(GridSpec::Linspace(5).points(&problem).is_err());
    }
}
