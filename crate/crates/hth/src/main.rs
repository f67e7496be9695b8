use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hth::checks::{quadcheck, verify, CheckReport};
use hth::plot::{emit_plot_data, GridSpec};
use hth::{run_experiment, ExperimentConfig, HthError};

#[derive(Parser)]
#[command(
    name = "hth",
    version,
    about = "Hard thresholding hyperinterpolation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Override the master seed.
    #[arg(short, long)]
    seed: Option<u64>,
    /// Directory for output files; created if missing.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(short = 'j', long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Gram identity, reproduction and thresholding identities.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Override the polynomial degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Run the repeated noisy trials and write the error table.
    Run {
        #[command(flatten)]
        common: Common,
        /// Override the number of trials.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Sample the fitted polynomials on a plotting grid.
    Plotdata {
        #[command(flatten)]
        common: Common,
        /// linspace:N | polar:NR:NT | latlon:NLAT:NLON | slice:x=c:N | nodes
        #[arg(short, long)]
        grid: String,
        /// Output file name inside the output directory.
        #[arg(long, default_value = "plot.csv")]
        name: String,
    },
    /// Integrate monomials with known moments using the domain rule.
    Quadcheck {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Check,
    Usage(HthError),
}

impl From<HthError> for Failure {
    fn from(e: HthError) -> Self {
        Failure::Usage(e)
    }
}

fn prepare(common: &Common) -> Result<ExperimentConfig, Failure> {
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| HthError::config(format!("thread pool: {e}")))?;
    }
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &common.out {
        std::fs::create_dir_all(dir).map_err(|e| HthError::Io {
            path: dir.clone(),
            source: e,
        })?;
    }
    Ok(cfg)
}

/// `name` inside `--out`, or `fallback` when no directory was given.
fn target(common: &Common, fallback: Option<&Path>, name: &str) -> Option<PathBuf> {
    match (&common.out, fallback) {
        (Some(dir), Some(f)) => Some(dir.join(f.file_name().unwrap_or(name.as_ref()))),
        (Some(dir), None) => Some(dir.join(name)),
        (None, f) => f.map(Path::to_path_buf),
    }
}

fn write_report(report: &CheckReport, common: &Common, name: &str) -> Result<(), Failure> {
    print!("{}", report.to_table());
    if let Some(dir) = &common.out {
        let path = dir.join(name);
        let json = serde_json::to_string_pretty(report).map_err(HthError::from)?;
        std::fs::write(&path, json).map_err(|e| HthError::Io { path, source: e })?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify { common, degree } => {
            let cfg = prepare(&common)?;
            let mut spec = cfg.domain_spec()?;
            if let Some(d) = degree {
                spec = spec.with_degree(d);
            }
            write_report(&verify(&spec, cfg.seed), &common, "verify.json")
        }
        Command::Quadcheck { common } => {
            let cfg = prepare(&common)?;
            write_report(&quadcheck(&cfg.domain_spec()?), &common, "quadcheck.json")
        }
        Command::Run { common, trials } => {
            let mut cfg = prepare(&common)?;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            let report = run_experiment(&cfg)?;
            let stem = common
                .config
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("results");
            let csv = target(&common, cfg.output_csv.as_deref(), &format!("{stem}.csv"));
            let json = target(&common, cfg.output_json.as_deref(), &format!("{stem}.json"));
            match &csv {
                Some(path) => report.write_csv(path)?,
                None => print!("{}", report.to_csv()?),
            }
            if let Some(path) = &json {
                report.write_json(path)?;
            }
            if csv.is_some() {
                print!("{}", report.to_csv()?);
            }
            Ok(())
        }
        Command::Plotdata { common, grid, name } => {
            let cfg = prepare(&common)?;
            let grid: GridSpec = grid.parse()?;
            let data = emit_plot_data(&cfg, &grid, cfg.seed)?;
            let path = common.out.as_deref().unwrap_or(Path::new(".")).join(&name);
            data.write(&path)?;
            eprintln!("wrote {} rows to {}", data.rows.len(), path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
