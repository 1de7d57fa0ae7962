use thiserror::Error;

/// Errors raised by the geometric and combinatorial routines.
///
/// Structural contradictions are reported, never repaired.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("structural contradiction: {message} (vertices {vertices:?})")]
    Structural { message: String, vertices: Vec<usize> },
    #[error("root finding failed: {0}")]
    NoConvergence(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>, vertices: Vec<usize>) -> Self {
        Error::Structural { message: msg.into(), vertices }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
