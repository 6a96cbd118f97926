use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root system {series}{rank}: {reason}")]
    InvalidRootSystem { series: char, rank: usize, reason: String },
    #[error("cannot parse algebra name {0:?} (expected e.g. \"A1\", \"G2\")")]
    UnknownAlgebra(String),
    #[error("weight {weight:?} has wrong length for rank {rank}")]
    WrongRank { weight: Vec<i64>, rank: usize },
    #[error("weight {0:?} is not dominant")]
    NonDominant(Vec<i64>),
    #[error("label {label:?} is not in the level-{level} alphabet")]
    LabelOutsideAlphabet { label: Vec<i64>, level: u32 },
    #[error("marked points must be pairwise distinct")]
    CoincidentPoints,
    #[error("empty valid window: {0}")]
    EmptyWindow(String),
    #[error("incompatible graph: {0}")]
    IncompatibleGraph(String),
    #[error("path touches the diagonal z_{i} = z_{j}")]
    PathOnDiagonal { i: usize, j: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A violated internal invariant. Always an implementation bug, never user error.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
