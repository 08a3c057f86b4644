use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid prime {0}: {1}")]
    InvalidPrime(u32, &'static str),
    #[error("polynomial is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: i64 },
    #[error("invalid degree matrix: {0}")]
    InvalidDegreeMatrix(String),
    #[error("degree matrix is empty: a_{{i-1}} - b_i <= 0 at i = {0}")]
    EmptyLocus(usize),
    #[error("{0}")]
    Unsupported(String),
    #[error("matrix shape or degree mismatch: {0}")]
    Mismatch(String),
    #[error("random matrices stayed degenerate after {attempts} draws (last seed {last_seed}): {reason}")]
    Degenerate { attempts: usize, last_seed: u64, reason: String },
    #[error("syzygy search did not stabilize by degree {bound} (window {window}); partial value {partial:?}")]
    NotConverged { bound: i64, window: usize, partial: Option<i64> },
    #[error("parse error: {0}")]
    Parse(String),
}
