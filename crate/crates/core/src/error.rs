use thiserror::Error;

use crate::scalar::{IsOverflow, Overflow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("vector is not in the kernel of the matrix")]
    NotInKernel,
    #[error("the zero vector is not allowed here")]
    ZeroVector,
    #[error("matrix must be nonnegative with no zero column (fibers would be infinite)")]
    UnboundedFiber,
    #[error("right-hand side must be nonnegative")]
    NegativeRhs,
    #[error("point is not in the fiber")]
    NotInFiber,
    #[error("support of the vector is not contained in the chosen columns")]
    SupportNotContained,
    #[error("time budget exhausted")]
    Timeout,
    #[error("machine integer overflow")]
    Overflow,
}

impl From<Overflow> for Error {
    fn from(_: Overflow) -> Self {
        Error::Overflow
    }
}

impl IsOverflow for Error {
    fn is_overflow(&self) -> bool {
        matches!(self, Error::Overflow)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
