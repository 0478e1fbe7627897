use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cone is not pointed (it contains a line)")]
    NotPointed,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("cone is not Gorenstein: {0}")]
    NotGorenstein(String),
    #[error("polytope vertices do not affinely span the ambient space")]
    DegeneratePolytope,
    #[error("degree functional vanishes on a nonzero ray; the slice is unbounded")]
    UnboundedSlice,
    #[error("poset interval is not Eulerian")]
    NotEulerian,
    #[error("truncation degree {degree} is too small: {reason}")]
    TruncationTooSmall { degree: usize, reason: String },
    #[error("filtered quotient did not stabilize: {0}")]
    StabilizationFailed(String),
    #[error("coefficient function is degenerate: {0}")]
    DegenerateCoefficients(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid input: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
