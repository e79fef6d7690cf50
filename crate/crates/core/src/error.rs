use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps these onto its exit codes, so the variants follow the
/// categories a caller needs to distinguish rather than the module that
/// raised them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A combinatorial budget (subset enumeration, exact solver size, step
    /// budget) would be exceeded.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
