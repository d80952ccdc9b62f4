//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension n = {0}; need n >= 1")]
    InvalidDimension(usize),

    #[error("invalid twist rank r = {0}; need r >= 2")]
    InvalidRank(usize),

    #[error("invalid tensor power m = {0}; need m >= 1")]
    InvalidPower(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("tensor factor {a} out of range for power {m}")]
    FactorOutOfRange { a: usize, m: usize },

    #[error("form indices must be strictly increasing and in range: {0}")]
    InvalidForm(String),

    #[error("total dimension {dim} exceeds the configured cap {cap}")]
    DimensionCapExceeded { dim: u128, cap: u128 },

    #[error("operation requires a non-zero spinor")]
    ZeroSpinor,

    #[error("matrix is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("matrix is not antisymmetric: {0}")]
    NotAntisymmetric(String),

    #[error("empty sample list")]
    EmptySamples,

    #[error("volume must be positive, got {0}")]
    NonPositiveVolume(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("eigenvalue iteration failed to converge within {iterations} iterations")]
    EigenConvergence { iterations: usize },

    #[error("dense eigensolve cap exceeded: dimension {dim} > {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
