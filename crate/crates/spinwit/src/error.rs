use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {dim} exceeds the capacity cap {cap}")]
    Capacity { dim: usize, cap: usize },
    #[error("operator is not hermitian (relative deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("unbounded polytope")]
    Unbounded,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
