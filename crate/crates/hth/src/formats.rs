//! Plain-text inputs: spherical designs, custom quadrature rules and
//! tabulated bases. Fields are whitespace separated, `#` starts a comment and
//! blank lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hth_core::domains::sphere::sphere_design_rule;
use hth_core::{BasisMatrix, QuadratureRule};

use crate::error::{HthError, Result};

/// Non-empty, comment-stripped rows with their 1-based line numbers.
fn rows(path: &Path, text: &str) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let values = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| HthError::Format {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: format!("not a number: {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push((i + 1, values));
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HthError::io(path, e))
}

fn format_err(path: &Path, line: usize, message: impl Into<String>) -> HthError {
    HthError::Format {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Unit vectors of a design file, flattened.
pub fn parse_design(path: &Path, text: &str) -> Result<Vec<f64>> {
    let mut points = Vec::new();
    for (line, row) in rows(path, text)? {
        if row.len() != 3 {
            return Err(format_err(
                path,
                line,
                format!("expected 3 coordinates, found {}", row.len()),
            ));
        }
        points.extend_from_slice(&row);
    }
    if points.is_empty() {
        return Err(format_err(path, 0, "no points"));
    }
    Ok(points)
}

/// Loads a design file and verifies it as a `strength`-design.
pub fn load_design(path: &Path, strength: usize) -> Result<QuadratureRule> {
    let points = parse_design(path, &read(path)?)?;
    Ok(sphere_design_rule(points, strength)?)
}

pub fn write_design(path: &Path, points: &[f64], header: &str) -> Result<()> {
    let mut text = String::new();
    for line in header.lines() {
        let _ = writeln!(text, "# {line}");
    }
    for x in points.chunks_exact(3) {
        let _ = writeln!(text, "{:.17e} {:.17e} {:.17e}", x[0], x[1], x[2]);
    }
    fs::write(path, text).map_err(|e| HthError::io(path, e))
}

/// A quadrature file: rows `w x_1 .. x_s`. The volume is `Σ w` and the
/// declared exactness is `exactness`.
pub fn parse_quadrature(path: &Path, text: &str, exactness: usize) -> Result<QuadratureRule> {
    let rows = rows(path, text)?;
    let Some((_, first)) = rows.first() else {
        return Err(format_err(path, 0, "no nodes"));
    };
    let dim = first.len().saturating_sub(1);
    if dim == 0 {
        return Err(format_err(
            path,
            rows[0].0,
            "a row needs a weight and coordinates",
        ));
    }
    let mut nodes = Vec::with_capacity(rows.len() * dim);
    let mut weights = Vec::with_capacity(rows.len());
    for (line, row) in &rows {
        if row.len() != dim + 1 {
            return Err(format_err(
                path,
                *line,
                format!("expected {} fields, found {}", dim + 1, row.len()),
            ));
        }
        weights.push(row[0]);
        nodes.extend_from_slice(&row[1..]);
    }
    let volume = weights.iter().sum();
    Ok(QuadratureRule::new(dim, nodes, weights, exactness, volume)?)
}

pub fn load_quadrature(path: &Path, exactness: usize) -> Result<QuadratureRule> {
    parse_quadrature(path, &read(path)?, exactness)
}

pub fn write_quadrature(path: &Path, rule: &QuadratureRule) -> Result<()> {
    let mut text = String::new();
    for (x, w) in rule.nodes().zip(rule.weights()) {
        let _ = write!(text, "{w:.17e}");
        for c in x {
            let _ = write!(text, " {c:.17e}");
        }
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| HthError::io(path, e))
}

/// A basis file: the first row lists the column degrees, then one row of
/// basis values per node.
pub fn parse_basis(path: &Path, text: &str) -> Result<BasisMatrix> {
    let rows = rows(path, text)?;
    let Some((line, first)) = rows.first() else {
        return Err(format_err(path, 0, "missing degree row"));
    };
    let degrees = first
        .iter()
        .map(|&g| {
            if g >= 0.0 && g.fract() == 0.0 {
                Ok(g as usize)
            } else {
                Err(format_err(
                    path,
                    *line,
                    format!("degree {g} is not a non-negative integer"),
                ))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let d = degrees.len();
    let mut values = Vec::with_capacity((rows.len() - 1) * d);
    for (line, row) in &rows[1..] {
        if row.len() != d {
            return Err(format_err(
                path,
                *line,
                format!("expected {d} values, found {}", row.len()),
            ));
        }
        values.extend_from_slice(row);
    }
    let total = degrees.iter().copied().max().unwrap_or(0);
    Ok(BasisMatrix::from_rows(
        rows.len() - 1,
        &values,
        degrees,
        total,
    )?)
}

pub fn load_basis(path: &Path) -> Result<BasisMatrix> {
    parse_basis(path, &read(path)?)
}

pub fn write_basis(path: &Path, basis: &BasisMatrix) -> Result<()> {
    let mut text = String::new();
    let degrees: Vec<String> = basis.degrees().iter().map(|g| g.to_string()).collect();
    text.push_str(&degrees.join(" "));
    text.push('\n');
    for j in 0..basis.rows() {
        let row: Vec<String> = (0..basis.cols())
            .map(|l| format!("{:.17e}", basis.get(j, l)))
            .collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| HthError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hth_core::domains::interval::{gauss_legendre_rule, legendre_basis};

    #[test]
    fn design_rows_and_comments() {
        let p = Path::new("mem");
        let pts = parse_design(p, "# octahedron\n1 0 0\n-1 0 0 # west\n\n0 1 0\n").unwrap();
        assert_eq!(pts.len(), 9);
        assert!(parse_design(p, "1 0\n").is_err());
        assert!(parse_design(p, "1 0 x\n").is_err());
    }

    #[test]
    fn quadrature_and_basis_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let rule = gauss_legendre_rule(12).unwrap();
        let basis = legendre_basis(6, rule.node_data()).unwrap();
        let qp = dir.path().join("q.txt");
        let bp = dir.path().join("b.txt");
        write_quadrature(&qp, &rule).unwrap();
        write_basis(&bp, &basis).unwrap();
        let rule2 = load_quadrature(&qp, 12).unwrap();
        let basis2 = load_basis(&bp).unwrap();
        assert_eq!(rule2.weights(), rule.weights());
        assert_eq!(rule2.node_data(), rule.node_data());
        assert_eq!(basis2.degrees(), basis.degrees());
        assert_eq!(basis2.get(3, 4), basis.get(3, 4));
    }

    #[test]
    fn negative_weight_is_rejected() {
        let p = Path::new("mem");
        assert!(parse_quadrature(p, "1 0.5\n-1 0.2\n", 1).is_err());
    }
}
