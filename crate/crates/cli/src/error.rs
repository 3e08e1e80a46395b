use std::process::ExitCode;

use gaussclone::CloneError;

/// Command failure, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Invalid input or violated precondition (exit 2).
    #[error("{0}")]
    Input(String),
    /// Output could not be written (exit 2).
    #[error("{0}")]
    Io(String),
    /// A verification or certification ran to completion and failed (exit 3).
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Input(_) | Self::Io(_) => ExitCode::from(2),
            Self::Failed(_) => ExitCode::from(3),
        }
    }
}

impl From<CloneError> for CliError {
    fn from(e: CloneError) -> Self {
        Self::Input(e.to_string())
    }
}
