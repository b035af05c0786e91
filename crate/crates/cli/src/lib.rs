//! Library side of the `lambert-coeffs` binary: table serialization, the
//! verification suite and the route benchmark.

pub mod bench;
pub mod format;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] lambert_coeffs::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed table: {0}")]
    Parse(String),
}

impl CliError {
    /// 1 for runtime failures, 2 for bad invocations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(lambert_coeffs::Error::Domain(_)) => 2,
            _ => 1,
        }
    }
}
