use std::io;

use crate::config::ConfigError;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numeric(#[from] nmdiff_core::Error),
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Config(_) => 2,
            Self::Numeric(_) | Self::Io(_) => 3,
            Self::Validation(_) => 4,
        }
    }
}
