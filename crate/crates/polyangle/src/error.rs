//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("grade out of range: {0}")]
    GradeOverflow(String),

    #[error("rank-deficient frame (gram determinant {0:.3e})")]
    RankDeficientFrame(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical rank unstable: straddling singular values {above:.3e} / {below:.3e}")]
    UnstableRank { above: f64, below: f64 },

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn dim(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
