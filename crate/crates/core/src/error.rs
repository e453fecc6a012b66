//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A distribution or procedure parameter violates its constraints.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is undefined at the requested point (e.g. 0/0 ratios).
    #[error("undefined at this point: {0}")]
    Undefined(String),

    /// Input exceeds a guarded size limit.
    #[error("input too large: {0}")]
    SizeLimit(String),

    /// Paired inputs have inconsistent lengths.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// A model is degenerate for the requested analysis (e.g. pi1 = 0).
    #[error("degenerate model: {0}")]
    Degenerate(String),

    /// An iterative numerical routine failed to produce a usable result.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
