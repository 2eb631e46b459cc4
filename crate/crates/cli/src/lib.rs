//! File formats, charts and the `mwstems` command line.

pub mod cli;
pub mod config;
pub mod json;
pub mod svg;
pub mod verify;

use std::path::PathBuf;

/// Failures of the command line, each with its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid field: {0}")]
    Field(#[source] mwstems_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(#[source] mwstems_core::Error),
    #[error("chart: {0}")]
    Chart(#[from] svg::SizeError),
    #[error("{0} acceptance criteria failed")]
    Mismatch(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Config(_) => 2,
            CliError::Field(_) => 3,
            CliError::Io { .. } => 4,
            CliError::Schema(_) => 5,
            CliError::Compute(_) | CliError::Chart(_) => 6,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}
