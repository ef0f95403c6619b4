use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate document id `{id}` (records {first} and {second})")]
    DuplicateDocument { id: String, first: usize, second: usize },

    #[error("no variable occurs in at least {min_occurrence} documents")]
    EmptyUniverse { min_occurrence: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected a {expected} matrix, found {found}")]
    WrongMeasure { expected: &'static str, found: &'static str },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("all target distances are zero")]
    ZeroDistances,

    #[error("zero target distance between nodes {i} and {j}")]
    ZeroDistance { i: usize, j: usize },

    #[error("zero target distance between nodes {i} and {j} in slice {t}")]
    ZeroSliceDistance { i: usize, j: usize, t: usize },

    #[error("graph is disconnected ({} components): {components:?}", components.len())]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("graph has no edges")]
    NoEdges,

    #[error("negative edge weight {weight} between nodes {a} and {b}")]
    NegativeWeight { a: usize, b: usize, weight: f64 },

    #[error("eigen-solver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("factor {factor} has no positive loading")]
    NoPositiveLoading { factor: usize },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
}
