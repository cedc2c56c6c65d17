use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid code distance {0}: must be at least 2")]
    InvalidDistance(usize),
    #[error("invalid sparsification ratio {s} for distance {d}: need s < d")]
    InvalidRatio { s: usize, d: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid probability {0}: must lie in [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    #[error("unknown export format `{0}`")]
    UnknownFormat(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("defect set cannot be matched on this lattice")]
    Unsatisfiable,
    #[error("too many defects ({got}); the exact matcher supports at most {max}")]
    TooManyDefects { got: usize, max: usize },
    #[error("conditioning event has probability zero")]
    ZeroProbabilityEvent,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("graph does not belong to this code: {0}")]
    Mismatch(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
