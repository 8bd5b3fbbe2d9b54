use std::path::Path;

use nrs_core::NrsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    /// Malformed or empty data file.
    #[error("{path}: {msg}")]
    Data { path: String, msg: String },
    #[error("numeric failure: {0}")]
    Numeric(#[from] NrsError),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn data(path: &Path, msg: impl Into<String>) -> Self {
        CliError::Data {
            path: path.display().to_string(),
            msg: msg.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Data { .. } | CliError::Numeric(_) => 3,
        }
    }
}
