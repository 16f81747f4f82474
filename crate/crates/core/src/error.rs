use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at position {position} near `{token}`: {message}")]
    Parse { message: String, token: String, position: usize },

    #[error("non-homogeneous input: monomial {monomial} has degree {found}, expected {expected}")]
    NonHomogeneous { monomial: String, expected: u32, found: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point {0} lies on T = 0, outside the affine chart")]
    Chart(String),

    #[error("line lies on the surface")]
    LineOnSurface,

    #[error("point is not on the surface: {0}")]
    NotOnSurface(String),

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("positive-dimensional solution set: {0}")]
    PositiveDimensional(String),

    #[error("improper intersection: {0}")]
    Improper(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("lines are skew")]
    SkewLines,

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
