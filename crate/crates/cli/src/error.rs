use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag values that can be detected from the configuration.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot read {}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    /// The input was read but the pipeline could not complete on it.
    #[error(transparent)]
    Compute(#[from] synthrank_core::Error),
}

impl CliError {
    /// 2 for configuration and usage problems, 1 for computation errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Compute(_) => 1,
        }
    }
}
