use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is structurally singular (empty row or column {0})")]
    StructurallySingular(usize),
    #[error("matrix is numerically singular (pivot {index} has modulus {pivot:e})")]
    NumericallySingular { index: usize, pivot: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("frequency system {index} is singular")]
    SingularFrequency { index: usize },
    #[error("evaluation at node {node} failed: {source}")]
    EvaluationNode {
        node: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("right-hand side is zero, relative residual undefined")]
    ZeroRightHandSide,
    #[error("time matrix bandwidth {bandwidth} exceeds the low-rank limit {limit}")]
    BandwidthTooLarge { bandwidth: usize, limit: usize },
    #[error("Sylvester pencil is singular at eigenvalue pair ({i}, {j})")]
    SingularPencil { i: usize, j: usize },
    #[error("discs overlap or touch")]
    OverlappingSets,
    #[error("no spectral enclosure available for problem {0}")]
    MissingEnclosure(String),
    #[error("shifted factorization failed for sigma = {sigma}: {source}; try another sigma")]
    SigmaShift {
        sigma: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("inner iterative solve did not converge (relres {0:e})")]
    InnerSolve(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
