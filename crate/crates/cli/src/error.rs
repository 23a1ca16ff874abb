use erdos728_core::Error as CoreError;

/// Failure classes with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Invalid flags or parameters (exit 2).
    #[error("{0}")]
    Usage(String),
    /// `--require-hit` was set and the search found nothing (exit 3).
    #[error("no good m in the search interval")]
    Miss,
    /// Anything else, including a failed internal consistency check (exit 1).
    #[error(transparent)]
    Internal(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Miss => 3,
            CliError::Internal(_) => 1,
        }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError::Internal(anyhow::anyhow!(msg.into()))
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::OracleDisagreement(_) => CliError::Internal(e.into()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
