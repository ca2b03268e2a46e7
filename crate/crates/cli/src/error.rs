use discforge::DiscError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input.
    #[error("{0}")]
    Input(String),
    /// The mathematics did not certify.
    #[error("{0}")]
    Certificate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Certificate(_) => 2,
        }
    }
}

impl From<DiscError> for CliError {
    fn from(e: DiscError) -> Self {
        match e {
            DiscError::Certificate(_)
            | DiscError::ChainStalled { .. }
            | DiscError::ApproximationFailed { .. }
            | DiscError::TruncationFailed { .. } => CliError::Certificate(e.to_string()),
            DiscError::InvalidParameter(_)
            | DiscError::NotRealValued { .. }
            | DiscError::NotAnalytic { .. }
            | DiscError::GridTooSmall { .. }
            | DiscError::InvalidPiecewise(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("I/O error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
