use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] ils_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("instance size {size} exceeds the exhaustive-search limit of {limit} for {problem}")]
    SizeLimit {
        problem: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("solution cost mismatch: file states {stated}, recomputed {actual}")]
    CostMismatch { stated: i64, actual: i64 },

    #[error("{0}")]
    Data(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Machine-readable category printed by the command line front end.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Core(e) => e.category(),
            Error::Io { .. } => "io",
            Error::Config(_) => "config",
            Error::SizeLimit { .. } => "size-limit",
            Error::CostMismatch { .. } => "cost-mismatch",
            Error::Data(_) => "data",
        }
    }
}

impl From<toml::de::Error> for Error {
    fn from(e: toml::de::Error) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Data(e.to_string())
    }
}
