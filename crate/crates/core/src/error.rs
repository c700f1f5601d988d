use thiserror::Error;

use crate::smallmat::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("state has dimension {found}, model expects {expected}")]
    StateDimension { expected: usize, found: usize },
    #[error("step count must be non-negative, got {0}")]
    NegativeTime(i64),
    #[error("internal consistency check failed: {check} (residual {residual:e})")]
    Consistency { check: &'static str, residual: f64 },
    #[error("sweep rejected N = {n}: {reason}")]
    InvalidSweep { n: usize, reason: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
