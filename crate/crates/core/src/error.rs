use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: self-loop on vertex {vertex} rejected")]
    SelfLoop { line: usize, vertex: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown named graph `{0}`")]
    UnknownGraph(String),

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("insufficient moments: need order {needed}, have {available}")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("degenerate denominator: eigenvalues {lambda} and {mu} sum to zero with overlap {overlap:e}")]
    DegenerateDenominator { lambda: f64, mu: f64, overlap: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed or inconsistent input data.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::SelfLoop { .. } | Error::UnknownGraph(_) | Error::Io(_) | Error::Json(_)
        )
    }
}
