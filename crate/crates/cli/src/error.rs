use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(dsrec_core::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn usage(msg: impl fmt::Display) -> Self {
        CliError::Usage(msg.to_string())
    }

    /// 1 usage, 2 data, 3 internal.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<dsrec_core::Error> for CliError {
    fn from(e: dsrec_core::Error) -> Self {
        match e {
            dsrec_core::Error::Config(msg) => CliError::Usage(msg),
            other => CliError::Data(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
