use thiserror::Error;

/// Errors produced by graph construction, ranking and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input contains no nodes")]
    NoNodes,

    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("missing *Vertices header")]
    MissingVerticesHeader,

    #[error("line {line}: vertex {id} was not declared")]
    UndeclaredVertex { line: usize, id: usize },

    #[error("line {line}: vertex {id} declared twice")]
    DuplicateVertex { line: usize, id: usize },

    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },

    #[error("node {node} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("attachment probabilities must be nonnegative and sum to 1 (got {0:?})")]
    InvalidProbabilities([f64; 3]),

    #[error("damping parameter {0} outside [0, 1]")]
    InvalidAlpha(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown benchmark graph `{0}`")]
    UnknownBenchmark(String),

    #[error("initial vector is zero")]
    ZeroInitialVector,

    #[error("column {column} sums to {sum}, expected 1")]
    NotStochastic { column: usize, sum: f64 },

    #[error("distribution sums to {sum}, expected 1")]
    Unnormalized { sum: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("need at least {needed} positive values, found {found}")]
    TooFewValues { needed: usize, found: usize },

    #[error("zero value at sorted index {index} inside the fit range")]
    ZeroInRange { index: usize },

    #[error("empty ensemble")]
    EmptyEnsemble,

    #[error("dynamical subspace basis lost orthogonality (deviation {0:e})")]
    LossOfOrthogonality(f64),

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
