use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(fanout_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(fanout_core::Error::CapExceeded { .. }) => ExitCode::from(3),
            _ => ExitCode::from(2),
        }
    }
}

impl From<fanout_core::Error> for CliError {
    fn from(e: fanout_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
