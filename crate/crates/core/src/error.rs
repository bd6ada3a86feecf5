use thiserror::Error;

/// Errors raised by the gramlab algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {index} is not in the open unit disk (|z| = {modulus})")]
    NotInDisk { index: usize, modulus: f64 },

    #[error("points {first} and {second} coincide (pseudohyperbolic distance {distance:e})")]
    DuplicatePoints {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is ill-conditioned (condition number {cond:e} exceeds {cap:e})")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("Schatten exponent must satisfy p >= 1, got {0}")]
    InvalidP(f64),

    #[error("separation constant must lie in (0, 1], got {0}")]
    InvalidDelta(f64),

    #[error("sequence of length {len} is too short (need at least {min})")]
    TooShort { len: usize, min: usize },

    #[error("invalid sequence file: {0}")]
    InvalidFile(String),

    #[error("length mismatch: {nodes} nodes but {targets} targets")]
    LengthMismatch { nodes: usize, targets: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
