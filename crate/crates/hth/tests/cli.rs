use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hth::formats::{write_basis, write_quadrature};
use hth_core::domains::interval::{gauss_legendre_rule, legendre_basis};
use hth_core::BasisMatrix;
use tempfile::TempDir;

fn hth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const INTERVAL: &str = r#"
domain = "interval"
degree = 20
points = 30
function = "interval_osc"
noise = "gaussian"
sigma = [0.1, 0.2]
lambda_log10 = [-1.5, -1.0]
trials = 4
seed = 5
"#;

fn custom_files(dir: &Path, corrupt: bool) -> String {
    let rule = gauss_legendre_rule(12).unwrap();
    let basis = legendre_basis(5, rule.node_data()).unwrap();
    let basis = if corrupt {
        let mut values: Vec<f64> = basis.columns().flatten().copied().collect();
        values[3] += 0.25;
        BasisMatrix::new(basis.rows(), values, basis.degrees().to_vec(), 5).unwrap()
    } else {
        basis
    };
    write_quadrature(&dir.join("q.txt"), &rule).unwrap();
    write_basis(&dir.join("b.txt"), &basis).unwrap();
    write(
        dir,
        "custom.toml",
        "domain = \"custom\"\ndegree = 5\nquadrature = \"q.txt\"\nbasis = \"b.txt\"\nfunction = \"interval_osc\"\n",
    )
}

#[test]
fn verify_interval_exits_zero() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "i.toml", INTERVAL);
    let out = hth(&["verify", "-c", &cfg, "-o", dir.path().to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert!(json["rows"].as_array().unwrap().len() > 10);
}

#[test]
fn custom_domain_round_trip_passes_verify() {
    let dir = TempDir::new().unwrap();
    let cfg = custom_files(dir.path(), false);
    assert_eq!(hth(&["verify", "-c", &cfg]).status.code(), Some(0));
    assert_eq!(hth(&["quadcheck", "-c", &cfg]).status.code(), Some(0));
}

#[test]
fn corrupted_custom_basis_fails_verify() {
    let dir = TempDir::new().unwrap();
    let cfg = custom_files(dir.path(), true);
    let out = hth(&["verify", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad.toml",
        "domain = \"interval\"\ndegree = 0\npoints = 4\nfunction = \"interval_osc\"\n",
    );
    assert_eq!(hth(&["run", "-c", &bad]).status.code(), Some(2));
    let unknown = write(dir.path(), "u.toml", &format!("{INTERVAL}colour = 1\n"));
    assert_eq!(hth(&["run", "-c", &unknown]).status.code(), Some(2));
    let missing = dir.path().join("nope.toml");
    assert_eq!(
        hth(&["run", "-c", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(hth(&["run"]).status.code(), Some(2));
    assert_eq!(hth(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn run_writes_csv_and_json_deterministically() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "sweep.toml", INTERVAL);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (out, threads) in [(&a, "1"), (&b, "3")] {
        let res = hth(&[
            "run",
            "-c",
            &cfg,
            "-o",
            out.to_str().unwrap(),
            "-j",
            threads,
        ]);
        assert_eq!(
            res.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
    }
    let csv = fs::read(a.join("sweep.csv")).unwrap();
    assert_eq!(csv, fs::read(b.join("sweep.csv")).unwrap());
    let text = String::from_utf8(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("method,lambda_log10,noise_param,mean_l2,std_l2,mean_sparsity")
    );
    assert_eq!(lines.count(), 2 * 2 * 3);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.join("sweep.json")).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn seed_override_changes_results() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "s.toml", INTERVAL);
    let first = hth(&["run", "-c", &cfg, "-s", "1"]).stdout;
    let second = hth(&["run", "-c", &cfg, "-s", "2"]).stdout;
    assert_ne!(first, second);
    assert_eq!(first, hth(&["run", "-c", &cfg, "-s", "1"]).stdout);
}

#[test]
fn plotdata_linspace_and_slice() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = write(dir.path(), "i.toml", INTERVAL);
    let res = hth(&[
        "plotdata",
        "-c",
        &cfg,
        "-o",
        out,
        "-g",
        "linspace:1001",
        "--name",
        "line.csv",
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let text = fs::read_to_string(dir.path().join("line.csv")).unwrap();
    assert_eq!(text.lines().count(), 1002);
    assert!(text.starts_with("x,f_clean,f_noisy,filtered,lasso,hard"));

    let cube = write(
        dir.path(),
        "c.toml",
        "domain = \"cube\"\ndegree = 4\nfunction = \"cube_exp\"\nnoise = \"gaussian\"\nsigma = [0.3]\nlambda_log10 = [-2.0]\n",
    );
    let res = hth(&[
        "plotdata",
        "-c",
        &cube,
        "-o",
        out,
        "-g",
        "slice:z=0:11",
        "--name",
        "slice.csv",
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let text = fs::read_to_string(dir.path().join("slice.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 121);
    assert!(rows
        .iter()
        .all(|r| r.split(',').nth(2).unwrap().parse::<f64>().unwrap() == 0.0));

    let res = hth(&["plotdata", "-c", &cube, "-o", out, "-g", "linspace:10"]);
    assert_eq!(res.status.code(), Some(2));
}
