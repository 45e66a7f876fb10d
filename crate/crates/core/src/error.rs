use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("the distinguished point does not lie on the variety: {0}")]
    PointNotOnVariety(String),

    /// The request is outside what the implemented theory licenses.
    #[error("unsupported scope: {0}")]
    UnsupportedScope(String),

    #[error("resource budget exhausted after {steps} steps ({what})")]
    Budget { steps: u64, what: String },
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
