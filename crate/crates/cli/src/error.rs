use thiserror::Error;

/// Failures mapped onto the documented exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit code 1.
    #[error("verification failed: {0}")]
    Verification(String),
    /// Exit code 2: non-unitary input, zero drive and other invalid values.
    #[error("invalid input: {0}")]
    Input(String),
    /// Exit code 3: unreadable or malformed files and arguments.
    #[error("parse error: {0}")]
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Parse(_) => 3,
        }
    }
}

impl From<qsynth_core::Error> for CliError {
    fn from(e: qsynth_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
