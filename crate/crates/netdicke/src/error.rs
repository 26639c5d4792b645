use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] netdicke_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("config key `{key}`: {reason}")]
    Field { key: String, reason: String },
    #[error("hilbert space of dimension {dim} exceeds the dense limit {limit}")]
    DimensionOverflow { dim: usize, limit: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("every row of the sweep failed; first error: {0}")]
    SweepFailed(String),
}

impl Error {
    pub fn field(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Field {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Tag written to the error column of a dataset.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Model(e) => e.code(),
            Error::Config(_) | Error::Field { .. } => "config",
            Error::DimensionOverflow { .. } => "dimension_overflow",
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::SweepFailed(_) => "sweep_failed",
        }
    }

    /// Configuration problems exit with 1, everything else with 2.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Field { .. } | Error::Parse { .. }
        )
    }
}
