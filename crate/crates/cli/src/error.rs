use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    EmptyInput(String),

    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },

    #[error("{failed} of {total} runs failed; see the manifest")]
    Partial { failed: usize, total: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Partial { .. } => 3,
            CliError::Io { .. } => 4,
            CliError::EmptyInput(_) => 5,
            CliError::Malformed { .. } => 6,
        }
    }
}
