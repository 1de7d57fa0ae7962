use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or out-of-domain input; `pointer` names the field.
    #[error("invalid input at `{pointer}`: {message}")]
    Input { pointer: String, message: String },
    #[error(transparent)]
    Core(#[from] cdk_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn input(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input { pointer: pointer.into(), message: message.into() }
    }

    /// Process exit code: 2 for input errors, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } | CliError::Io { .. } => 2,
            CliError::Core(cdk_core::Error::Domain(_) | cdk_core::Error::Degenerate(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
