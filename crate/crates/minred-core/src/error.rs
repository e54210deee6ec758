use thiserror::Error;

use crate::partitions::Partition;
use crate::polyring::ValidationReport;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("series is not a unit (zero constant term)")]
    NotAUnit,
    #[error("not integral at entry ({row}, {col})")]
    NotIntegral { row: usize, col: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("partition sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("coefficient index {index} exceeds degree {deg}")]
    IndexOutOfRange { index: usize, deg: usize },
    #[error("enumeration bound exceeded: {size} boxes > {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("polygon has a single segment; nothing to split")]
    NotSplit,
    #[error("validation failed: {}", .0.summary())]
    ValidationFailed(Box<ValidationReport>),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("odd-m segment without a partner")]
    UnpairedOddSegment,
    #[error("no witness found over the Gaussian rationals: {0}")]
    NotFoundInField(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("subspace condition violated: {0}")]
    DaggerViolated(String),
    #[error("realized Jordan type {got} differs from the expected {expected}")]
    Mismatch { expected: Partition, got: Partition },
    #[error("explicit realization incomplete: {0}")]
    SearchIncomplete(String),
    #[error("pairing is degenerate")]
    DegeneratePairing,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precision(msg: impl Into<String>) -> Error {
    Error::InsufficientPrecision(msg.into())
}
