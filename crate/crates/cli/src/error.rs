use std::path::PathBuf;

use heatzeta_core::Error as CoreError;

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invariant failure: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(error: CoreError) -> Self {
        match error {
            CoreError::InconsistentCounts { .. }
            | CoreError::QuadratureNonConvergence { .. }
            | CoreError::StepSizeUnderflow { .. } => CliError::Invariant(error.to_string()),
            _ => CliError::Input(error.to_string()),
        }
    }
}
