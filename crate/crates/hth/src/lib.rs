//! Experiments for hard thresholding hyperinterpolation: configuration
//! files, built-in test functions, design and custom-domain file formats,
//! the repeated-trial runner, plot data and conformance reports.
//!
//! The numerical routines live in [`hth_core`].

pub mod checks;
pub mod config;
mod error;
pub mod experiment;
pub mod formats;
pub mod functions;
pub mod plot;
pub mod problem;

pub use config::{DomainKind, DomainSpec, ExperimentConfig, Method};
pub use error::{HthError, Result};
pub use experiment::{run_experiment, ExperimentReport};
pub use functions::BuiltinFunction;
pub use hth_core;
pub use problem::Problem;
