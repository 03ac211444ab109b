//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("eigenvalue {value:.3e} below the negativity floor")]
    NegativeEigenvalue { value: f64 },
    #[error("Kraus set is not trace preserving (residual {residual:.3e})")]
    NotTracePreserving { residual: f64 },
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid flagged spec: {0}")]
    InvalidSpec(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("optimization failed: {0}")]
    Optimization(String),
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
