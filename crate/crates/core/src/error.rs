use thiserror::Error;

use crate::ring::parse::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mismatched groups: {0}")]
    MismatchedGroup(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid quotient: {0}")]
    InvalidQuotient(String),

    #[error("quotient of order {order} exceeds the cap {cap}")]
    QuotientTooLarge { order: u128, cap: u128 },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension {dim} exceeds the dense cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("matrix dimensions do not agree: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("QR iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("matrix is not integral")]
    NotIntegral,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("invalid irreducible representation parameters: {0}")]
    InvalidParams(String),

    #[error("torus point coordinate {index} has modulus {modulus}, expected 1")]
    OffTorus { index: usize, modulus: f64 },

    #[error("symbolic expansion limited to n <= {cap}, got {n}")]
    TooLarge { n: usize, cap: usize },

    #[error("symbolic characteristic polynomial needs exactly one free generator and no torsion, got rank {0}")]
    UnsupportedRank(usize),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
