use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("order {order} exceeds the exact-binomial cap of {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("expected {expected} positions for order {order}, got {got}")]
    PositionCount {
        order: usize,
        expected: usize,
        got: usize,
    },

    #[error("positions are not strictly increasing at index {index}")]
    NonMonotonicPositions { index: usize },

    #[error("coefficient system is singular or too ill-conditioned to solve")]
    SingularSystem,

    #[error("too few points: need at least {needed}, have {have}")]
    TooFewPoints { needed: usize, have: usize },

    #[error("position-aware sampling requested but the series has no positions")]
    MissingPositions,

    #[error("positions and measurements differ in length ({positions} vs {values})")]
    LengthMismatch { positions: usize, values: usize },

    #[error("subset index {index} is out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("beta sample is empty")]
    EmptySample,

    #[error("beta sample has {got} values, estimator needs at least {needed}")]
    SampleTooSmall { needed: usize, got: usize },

    #[error("jump parameter must be at least 1")]
    ZeroJump,

    #[error("estimated noise is zero, signal-to-noise ratio undefined")]
    ZeroNoise,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: positions not strictly increasing at line {line}")]
    NonMonotonicFile { path: PathBuf, line: usize },

    #[error("{path}: no data rows")]
    EmptyFile { path: PathBuf },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}
