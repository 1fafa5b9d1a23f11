//! CLI error classification. Exit codes are a stable contract:
//! 0 success, 2 validation, 3 I/O, 4 data format.

use std::fmt;

use zeta_deficiency::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
    DataFormat(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::DataFormat(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Io(msg) | CliError::DataFormat(msg) => {
                write!(f, "{msg}")
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::SpectrumFormat { .. } => CliError::DataFormat(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
