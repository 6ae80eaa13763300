use thiserror::Error;

use crate::exactnum::{ExactError, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters n = {n}, m = {m}: need m >= 1 and n >= 2m")]
    InvalidParameters { n: usize, m: usize },
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("profile {profile:?} is not feasible for multiplicities {k:?}")]
    InvalidProfile { profile: Vec<usize>, k: Vec<usize> },
    #[error("family has {0} levels; reduction needs at least 3")]
    NotReducible(usize),
    #[error("families belong to different parameters")]
    ParameterMismatch,
    #[error("n0 * n1 = {product} is out of range (0, {n})")]
    Range { product: usize, n: usize },
    #[error("universe would hold {count} vertices, above the cap of {cap}")]
    UniverseTooLarge { count: u64, cap: u64 },
    #[error("overlap i2 = {i2} is not feasible for n = {n}, k = {k}")]
    InfeasibleOverlap { n: usize, k: usize, i2: usize },
    #[error("points have inconsistent dimensions")]
    DimensionMismatch,
    #[error("{0}")]
    Exact(#[from] ExactError),
    #[error("{0}")]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
