use thiserror::Error;

/// Errors produced by the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range for {n_vars} variables")]
    IndexOutOfRange { index: usize, n_vars: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("transform length {k_plus_one} would alias entry degree {degree}")]
    DegreeAliasing { k_plus_one: usize, degree: usize },

    #[error("no roots: polynomial has degree 0")]
    NoRoots,

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("degenerate template: {0}")]
    DegenerateTemplate(String),

    #[error("no valid deletion pair")]
    NoValidDeletionPair,

    #[error("basis insufficient for recovery of variable {0}")]
    BasisInsufficient(usize),

    #[error("submatrix numerically singular")]
    SingularSubmatrix,

    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("rotate coordinates: leading coefficient vanishes")]
    RotateCoordinates,

    #[error("degenerate correspondences: nullspace dimension is not 4")]
    DegenerateCorrespondences,

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("template is for problem `{template}` but data is for `{data}`")]
    ProblemMismatch { template: String, data: String },

    #[error("recovered determinant coefficients are not real (relative imaginary part {0:e})")]
    NonRealCoefficients(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
