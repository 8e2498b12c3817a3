use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(anharmonic_core::Error),

    #[error("cannot write `{}`: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<anharmonic_core::Error> for CliError {
    fn from(e: anharmonic_core::Error) -> Self {
        use anharmonic_core::Error as E;
        match e {
            E::InvalidParameter { .. } | E::UnknownRegime(_) => CliError::Config(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
