use thiserror::Error;

/// Failures raised by constructors and operations in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arguments that violate an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// A computed or parsed object fails its own invariants.
    #[error("invalid value: {0}")]
    Validity(String),
    /// Sizes of two objects that must agree do not.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    /// Malformed JSON document.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
