//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building geometric objects or
/// running one of the computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate {value} on axis {axis} is outside [0, 1]")]
    CoordinateOutOfRange { axis: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid interval [{x}, {y}): need 0 <= x < y <= 1")]
    InvalidInterval { x: f64, y: f64 },

    #[error("invalid box bounds on axis {axis}: lo = {lo}, hi = {hi}")]
    InvalidBox { axis: usize, lo: f64, hi: f64 },

    #[error("box is degenerate on axis {axis}")]
    DegenerateAxis { axis: usize },

    #[error("dyadic interval index {a} out of range for depth {k}")]
    InvalidDyadicIndex { a: u64, k: u32 },

    #[error("point set must not be empty here")]
    EmptyPointSet,

    #[error("dimension {dim} is too small: need at least {min}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("instance too large: {boxes} candidate boxes exceed the cap of {cap}")]
    CapacityExceeded { boxes: u128, cap: u128 },

    #[error("point count {n} is not a power of two")]
    NotPowerOfTwo { n: usize },

    #[error("malformed generating-matrix data: {0}")]
    MatrixFormat(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}
