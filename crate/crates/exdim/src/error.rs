use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or inconsistent configuration (exit 1).
    #[error("{0}")]
    Validation(String),
    /// Failure inside a computation (exit 2).
    #[error("{0}")]
    Compute(#[from] exdim_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Malformed input file (exit 1).
    #[error("{path}:{line}: {msg}")]
    Format { path: PathBuf, line: usize, msg: String },
    /// A verification job found a violation (exit 2).
    #[error("{what} failed for {count} case(s)")]
    Check { what: &'static str, count: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Format { .. } => 1,
            CliError::Compute(_) | CliError::Io { .. } | CliError::Check { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "ValidationError",
            CliError::Compute(e) => e.name(),
            CliError::Io { .. } => "IoError",
            CliError::Format { .. } => "FormatError",
            CliError::Check { .. } => "CheckFailed",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Validation(msg.into()))
}
