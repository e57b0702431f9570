//! Error type shared across the crate.

use thiserror::Error;

use crate::dims::DimError;

/// Failure of a structural precondition.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Dim(#[from] DimError),
    #[error("axis sets differ: {0:#06b} vs {1:#06b}")]
    Axes(u8, u8),
    #[error("degrees differ: {0} vs {1}")]
    Degree(u8, u8),
    #[error("degree {deg} exceeds the {n} available axes")]
    DegreeTooHigh { deg: u8, n: u8 },
    #[error("value types differ: {0} vs {1}")]
    Valued(String, String),
    #[error("twist flags differ")]
    Twist,
    #[error("component count {found} does not match {expected}")]
    Components { expected: usize, found: usize },
    #[error("operand is not valid here: {0}")]
    Operand(String),
    #[error("metric is degenerate at the sample point")]
    Degenerate,
    #[error("transition is not orientation preserving")]
    Orientation,
    #[error("parameter out of range: {0}")]
    Param(String),
}

/// Crate result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;
