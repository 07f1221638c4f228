//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, validation, and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or vector dimensions do not match what an operation expects.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    /// A factor ordering d2 >= d1 is required but violated.
    #[error("factor ordering d2 >= d1 required, got ({d1}, {d2})")]
    UnorderedShape { d1: usize, d2: usize },

    /// A matrix failed a Hermiticity check.
    #[error("matrix is not Hermitian: max |A - A^H| entry is {residual:.3e}")]
    NotHermitian { residual: f64 },

    /// A matrix failed a positive-semidefiniteness check.
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.6e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// A scalar argument is outside its allowed domain.
    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// An iterative numerical routine failed to produce a result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A root bracket does not straddle a sign change.
    #[error("{criterion}: no sign change on [{lo}, {hi}]: {diagnosis}")]
    NoSignChange {
        criterion: String,
        lo: f64,
        hi: f64,
        diagnosis: String,
    },

    /// Two formulas that must agree disagreed beyond tolerance.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
