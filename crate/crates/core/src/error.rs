use thiserror::Error;

/// Errors raised by the witness library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spin length: 2S = {0} (must be at least 1)")]
    InvalidSpin(u32),

    #[error("no convergence in {routine} after {iterations} iterations")]
    NonConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("problem too large: {what} = {got} exceeds limit {limit}")]
    Size {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical consistency check failed: {0}")]
    Assertion(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
