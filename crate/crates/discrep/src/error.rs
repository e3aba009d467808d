use std::path::PathBuf;

use thiserror::Error;

/// Everything the harness can fail with, mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("config file {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error(transparent)]
    Numeric(#[from] discrep_core::Error),
    #[error("{failed} check(s) failed")]
    Checks { failed: usize },
    #[error("i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub fn usage(msg: impl Into<String>) -> Self {
        HarnessError::Usage(msg.into())
    }

    /// 2 for anything the user can fix by changing arguments, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Usage(_) | HarnessError::Config { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
