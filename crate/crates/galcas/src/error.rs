//! Crate error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two values built over different variable tables were combined.
    #[error("variable table mismatch: n={0} vs n={1}")]
    VarTableMismatch(usize, usize),

    /// A vector or matrix had the wrong length/shape for the given n.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Parameter outside its documented range.
    #[error("{what} out of range: {got} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        got: String,
        allowed: &'static str,
    },

    /// Exact linear algebra hit a singular matrix.
    #[error("matrix is singular")]
    Singular,

    /// A matrix expected to be skew-symmetric was not.
    #[error("matrix is not skew-symmetric at entry ({0},{1})")]
    NotSkew(usize, usize),

    /// A group element failed its shape validation.
    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),

    /// A commutator left the span of the basis (should be impossible for gal(n)).
    #[error("commutator of basis elements left the basis span")]
    NotClosed,

    /// The Jacobi identity failed on expanded structure constants.
    #[error("Jacobi identity violated for basis triple ({0},{1},{2})")]
    JacobiViolation(usize, usize, usize),

    /// Bad rational literal such as "3/0" or "x".
    #[error("cannot parse rational from {0:?}")]
    BadRational(String),

    /// Malformed or semantically invalid JSON input.
    #[error("invalid input: {0}")]
    BadInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
