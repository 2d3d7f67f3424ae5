use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two scene points coincide where a direction or distance is required.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A configuration field holds an out-of-range value.
    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The caller broke an operation's calling contract.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn validation(field: &str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_owned(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input rather than the runtime
    /// environment.
    pub fn is_config_error(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
