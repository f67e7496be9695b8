use std::path::PathBuf;

/// Failures of the experiment layer. `Config` and `Format` are the caller's
/// fault; `Core` wraps numerical preconditions from the library.
#[derive(Debug, thiserror::Error)]
pub enum HthError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: line {line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] hth_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl HthError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = HthError> = std::result::Result<T, E>;
