use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Anything that went wrong while running; exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<rcd_core::Error> for CliError {
    fn from(e: rcd_core::Error) -> Self {
        match e {
            rcd_core::Error::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Runtime(other.to_string()),
        }
    }
}
