use thiserror::Error;

/// Errors raised by the peeling library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} is not supported (only d = 2 is implemented)")]
    UnsupportedDimension(usize),

    #[error("non-finite coordinate at point {0}")]
    NonFinite(usize),

    #[error("empty point cloud")]
    EmptyCloud,

    #[error("singular affine map")]
    SingularMap,

    #[error("point {0} is not in the open upper half-space")]
    OutsideHalfSpace(usize),

    #[error("point {0} is not inside the parabola region")]
    OutsideParabola(usize),

    #[error("cloud has {got} points, verification bound is {bound}")]
    TooLarge { got: usize, bound: usize },

    #[error("points {0} and {1} share an abscissa; the sentinel construction needs distinct abscissas")]
    SharedAbscissa(usize, usize),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("query {query} is outside the tabulated support [{lo}, {hi}]")]
    OutsideTable { query: f64, lo: f64, hi: f64 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("density has unbounded support and no bounding box")]
    UnboundedDensity,

    #[error("trials must be at least {min}, got {got}")]
    TooFewTrials { min: usize, got: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
