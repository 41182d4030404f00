use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] minvol::Error),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot encode report: {0}")]
    Encode(#[from] serde_json::Error),
}

impl CliError {
    /// `2` for rejected input, `1` for failures while computing or writing.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                minvol::Error::InvalidParameter(_)
                | minvol::Error::Unsupported(_)
                | minvol::Error::Parse { .. }
                | minvol::Error::InvalidComplexStructure(_)
                | minvol::Error::Dimension { .. } => 2,
                _ => 1,
            },
            CliError::Io { .. } | CliError::Encode(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
