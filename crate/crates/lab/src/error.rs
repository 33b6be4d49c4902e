use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] ximarkov_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn config(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}
