use thiserror::Error;

use crate::l2::SandwichReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at position {position}")]
    NonFinite { position: usize },

    #[error("entry {position} has nonzero imaginary part in a real-field context")]
    ImaginaryInRealField { position: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("index set must not be empty")]
    EmptyIndexSet,

    #[error("index set must be strictly increasing (violated at position {position})")]
    UnorderedIndexSet { position: usize },

    #[error("index {index} is out of range for a family of {len} members")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("family has {members} members but the space has dimension {dimension}")]
    TooManyMembers { members: usize, dimension: usize },

    #[error(
        "vector {index} is numerically dependent on its predecessors (residual norm {norm:e})"
    )]
    Degenerate { index: usize, norm: f64 },

    #[error("family is not orthonormal: gram defect {defect:e} exceeds tolerance {tolerance:e}")]
    NotOrthonormal { defect: f64, tolerance: f64 },

    #[error("coefficient box does not match its index set: {0}")]
    BoxMismatch(String),

    #[error("operation requires a real-field context")]
    RequiresRealField,

    #[error("sandwich condition fails (lower margin {lower:e}, upper margin {upper:e})", lower = .0.min_margin_lower, upper = .0.min_margin_upper)]
    SandwichFailed(SandwichReport),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
