use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("projected {projected} vertices exceeds the cap of {cap}")]
    ResourceLimit { projected: u128, cap: u128 },
    #[error("degree {degree} out of range for complex of dimension {dim:?}")]
    DegreeOutOfRange { degree: usize, dim: Option<usize> },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("formula undefined: {0}")]
    Domain(String),
    #[error("malformed permutation: {0}")]
    BadPermutation(String),
    #[error("size mismatch: {0}")]
    Mismatch(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
