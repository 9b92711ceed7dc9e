use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported local dimensions {m}x{n}")]
    UnsupportedDimensions { m: usize, n: usize },

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("malformed state: {0}")]
    MalformedState(String),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("parameter outside its domain: {0}")]
    Domain(String),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("empty family or subspace")]
    Empty,

    /// The polynomial system has a positive-dimensional solution set, i.e.
    /// the subspace holds infinitely many product vectors.
    #[error("degenerate pencil, infinitely many product vectors: {0}")]
    DegeneratePencil(String),

    #[error("resultant degree {degree} exceeds guard {guard}")]
    DegreeGuard { degree: usize, guard: usize },

    #[error("family of size {size} is too small, need at least {required}")]
    FamilyTooSmall { size: usize, required: usize },

    #[error("family of size {size} exceeds the enumeration limit {limit}")]
    FamilyTooLarge { size: usize, limit: usize },

    #[error("family is not in general position")]
    NotGeneralPosition,

    #[error("degenerate extension: {0}")]
    DegenerateExtension(String),

    #[error("no drop-one face system is feasible")]
    NoFeasibleDrop,

    #[error("index out of range: {0}")]
    Index(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
