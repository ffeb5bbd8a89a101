use thiserror::Error;

/// Errors raised by the library. Each variant maps to one failure family so
/// callers (the CLI in particular) can pick an exit status without string
/// matching.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input broke a documented precondition (non-Hermitian matrix,
    /// wrong dimension, non-canonical triple, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An iterative kernel failed to converge.
    #[error("numeric failure in {what} after {iterations} iterations")]
    Numeric { what: &'static str, iterations: usize },

    /// Requested size is outside what the kernel supports.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Input is degenerate for the requested operation (zero Hamiltonian,
    /// exhausted retries, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A point is not where the geometric routine needs it to be.
    #[error("geometry: {0}")]
    Geometry(String),

    /// Malformed input document.
    #[error("parse error: {0}")]
    Parse(String),

    /// The source Hamiltonian cannot simulate the requested target.
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
