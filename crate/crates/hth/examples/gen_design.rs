//! Computes a numerical spherical `t`-design with `(t+1)²` points.
//!
//! Starts from a Fibonacci spiral and drives the moment residuals
//! `(4π/N) Σ_j Y_lm(x_j)`, `1 ≤ l ≤ t`, to zero with minimum-norm
//! Gauss–Newton steps taken in the tangent planes. The Jacobian is
//! central-differenced.
//!
//! ```text
//! cargo run --release -p hth --example gen_design -- 30 data/designs/t30.txt
//! ```

use std::path::PathBuf;

use hth::formats::write_design;
use hth_core::domains::sphere::{spherical_harmonic_basis, spiral_points};
use nalgebra::{DMatrix, DVector};

const AREA: f64 = 4.0 * std::f64::consts::PI;
const STEP: f64 = 1e-6;

fn residuals(points: &[f64], t: usize) -> DVector<f64> {
    let n = points.len() / 3;
    let y = spherical_harmonic_basis(t, points).expect("points on the sphere");
    DVector::from_iterator(
        y.cols() - 1,
        (1..y.cols()).map(|l| y.column(l).iter().sum::<f64>() * AREA / n as f64),
    )
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / r, v[1] / r, v[2] / r]
}

fn tangents(p: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let axis = if p[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let e1 = normalize(cross(p, axis));
    (e1, cross(p, e1))
}

fn moved(points: &[f64], dirs: &[[f64; 3]], h: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len());
    for (j, p) in points.chunks_exact(3).enumerate() {
        let q = normalize([
            p[0] + h[j] * dirs[j][0],
            p[1] + h[j] * dirs[j][1],
            p[2] + h[j] * dirs[j][2],
        ]);
        out.extend_from_slice(&q);
    }
    out
}

/// Per-point derivative of `Σ_j Y(x_j)` along one tangent field.
fn directional(points: &[f64], dirs: &[[f64; 3]], t: usize) -> DMatrix<f64> {
    let n = points.len() / 3;
    let plus = spherical_harmonic_basis(t, &moved(points, dirs, &vec![STEP; n])).unwrap();
    let minus = spherical_harmonic_basis(t, &moved(points, dirs, &vec![-STEP; n])).unwrap();
    let k = plus.cols() - 1;
    DMatrix::from_fn(k, n, |l, j| {
        (plus.get(j, l + 1) - minus.get(j, l + 1)) / (2.0 * STEP) * AREA / n as f64
    })
}

fn main() {
    let mut args = std::env::args().skip(1);
    let t: usize = args
        .next()
        .and_then(|s| s.parse().ok())
        .expect("usage: gen_design <strength> <output>");
    let out = PathBuf::from(args.next().expect("usage: gen_design <strength> <output>"));
    let n = (t + 1) * (t + 1);
    let mut points = spiral_points(n);

    for iter in 0..60 {
        let r = residuals(&points, t);
        let worst = r.amax();
        eprintln!("iter {iter:2}  max residual {worst:.3e}");
        if worst < 1e-14 {
            break;
        }
        let frames: Vec<_> = points
            .chunks_exact(3)
            .map(|p| tangents([p[0], p[1], p[2]]))
            .collect();
        let e1: Vec<_> = frames.iter().map(|f| f.0).collect();
        let e2: Vec<_> = frames.iter().map(|f| f.1).collect();
        let mut jac = DMatrix::zeros(r.len(), 2 * n);
        jac.columns_mut(0, n)
            .copy_from(&directional(&points, &e1, t));
        jac.columns_mut(n, n)
            .copy_from(&directional(&points, &e2, t));

        let normal = &jac * jac.transpose();
        let Some(chol) = normal.cholesky() else {
            eprintln!("singular normal matrix, stopping");
            break;
        };
        let step = jac.transpose() * chol.solve(&r);
        let shift: Vec<[f64; 3]> = (0..n)
            .map(|j| {
                let (a, b) = (step[j], step[n + j]);
                [
                    a * e1[j][0] + b * e2[j][0],
                    a * e1[j][1] + b * e2[j][1],
                    a * e1[j][2] + b * e2[j][2],
                ]
            })
            .collect();
        points = moved(&points, &shift, &vec![-1.0; n]);
    }

    let header = format!(
        "numerical spherical {t}-design, {n} points\n\
         Gauss-Newton from a Fibonacci spiral (examples/gen_design.rs)"
    );
    write_design(&out, &points, &header).expect("write design");
}
