use densecode_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{context}{source}")]
    Core { context: String, source: CoreError },
}

impl CliError {
    pub fn core(source: CoreError) -> Self {
        CliError::Core { context: String::new(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 1,
            CliError::Core { source, .. } => match source {
                CoreError::BadLength { .. }
                | CoreError::NotNormalized { .. }
                | CoreError::NonFinite { .. }
                | CoreError::ZeroDimension
                | CoreError::InvalidPermutation { .. } => 1,
                CoreError::ConvergenceFailure { .. }
                | CoreError::NegativeEigenvalue { .. }
                | CoreError::ZeroOperator
                | CoreError::NotHermitian { .. }
                | CoreError::NotSquare { .. } => 3,
                _ => 2,
            },
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::core(e)
    }
}
