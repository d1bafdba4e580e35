use std::fmt;

/// Where in an input a parse failure was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line number in a text format.
    Line(usize),
    /// 0-based byte offset in a binary format.
    Byte(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Byte(n) => write!(f, "byte {n}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("non-finite value encountered: {0}")]
    Numeric(String),

    /// A behavioral block was driven outside the region where its circuit works.
    #[error("outside block operating range: {0}")]
    OperatingRange(String),

    #[error("no convergence after {iterations} iterations")]
    Convergence { iterations: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: Location, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn parse(location: Location, msg: impl Into<String>) -> Self {
        Error::Parse {
            location,
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
