use thiserror::Error;

use crate::segre_veronese::PointConstraint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a supported prime (need a prime in [2^30, 2^32))")]
    UnsupportedModulus(u64),

    #[error("pfaffian needs a square matrix of even order, got {rows}x{cols}")]
    NotEvenSquare { rows: usize, cols: usize },

    #[error("matrix is not skew-symmetric (first violation at ({0}, {1}))")]
    NotSkewSymmetric(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("point constraint {constraint:?} is infeasible for n = {n}")]
    InfeasibleConstraint { constraint: PointConstraint, n: usize },

    #[error("zero vector is not a point of projective space")]
    ZeroVector,

    #[error("parameters out of range: {0}")]
    OutOfRange(String),

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("malformed record: {0}")]
    Parse(String),

    #[error("invalid proof node {claim}: {reason}")]
    InvalidProof { claim: String, reason: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
