use thiserror::Error;

use ghz_twins::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input.
    #[error("{0}")]
    Usage(String),
    /// Inputs that parse but lie outside the valid numeric domain.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        use CoreError::*;
        match e {
            InvalidLabel(_)
            | InvalidPauli(_)
            | Json(_)
            | MissingSettings(_)
            | MismatchedSettings
            | NoCoveringRecord(_)
            | MissingExpectation(_)
            | DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}
