//! CLI failure modes and their process exit codes.

use std::path::PathBuf;

/// Exit code contract: 0 success, 1 validation failure, 2 I/O failure,
/// 3 verification failure.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Invalid(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Verification(_) => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<fracwiener::Error> for CliError {
    fn from(err: fracwiener::Error) -> Self {
        CliError::Invalid(err.to_string())
    }
}
