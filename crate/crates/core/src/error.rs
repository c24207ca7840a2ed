use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported format: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Short machine-readable category used by the command line front end.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Unsupported(_) => "unsupported",
            Error::Config(_) => "config",
            Error::Parameter(_) => "parameter",
            Error::Degenerate(_) => "degenerate",
            Error::InvalidSolution(_) => "invalid-solution",
            Error::Io(_) => "io",
        }
    }
}
