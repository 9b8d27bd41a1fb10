use thiserror::Error;

use crate::structure::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground-set size {0} outside 1..=64")]
    GroundSet(usize),

    #[error("ground-set size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("mask {bits:#x} has bits outside the ground set [{n}]")]
    BitsOutOfRange { n: usize, bits: u64 },

    #[error("element {element} outside the ground set [{n}]")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("element {0} repeated within a set")]
    RepeatedElement(usize),

    #[error("set {0} appears more than once in the family")]
    DuplicateSet(String),

    #[error("{c}/{d} is not an irreducible fraction in [0, 1]")]
    InvalidFraction { c: u32, d: u32 },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("structural check {0} failed")]
    Structure(Violation),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("worker pool: {0}")]
    Runtime(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}
