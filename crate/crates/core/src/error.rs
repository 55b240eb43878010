//! Error type shared by all modules of the crate.

use nalgebra::DVector;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("tensor order must be at least 2, got {0}")]
    OrderTooSmall(usize),

    #[error("tensor dimension must be at least 1, got {0}")]
    DimTooSmall(usize),

    #[error("index {index} out of range [0, {dim}) in tuple position {position}")]
    IndexOutOfRange {
        index: usize,
        dim: usize,
        position: usize,
    },

    #[error("index tuple has {got} components, tensor order is {expected}")]
    TupleLengthMismatch { expected: usize, got: usize },

    #[error("non-finite tensor value {value} at entry {entry}")]
    NonFiniteValue { value: f64, entry: usize },

    #[error("empty index set")]
    EmptyIndexSet,

    #[error("index set contains {index}, valid range is [0, {dim})")]
    IndexSetOutOfRange { index: usize, dim: usize },

    #[error("elementwise power with fractional exponent {exponent} applied to negative element {value} at position {position}")]
    NegativePower {
        exponent: f64,
        value: f64,
        position: usize,
    },

    #[error("exponent must be positive, got {0}")]
    NonPositiveExponent(f64),

    #[error("operator must be elementwise nonnegative; entry {position} is {value}")]
    NegativeEntry { position: usize, value: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("power iteration did not converge within {max_iter} iterations; last bracket [{lower}, {upper}]")]
    PowerIterationStalled {
        max_iter: usize,
        lower: f64,
        upper: f64,
    },

    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),

    #[error("splitting matrix P has nonpositive diagonal at coordinates {0:?} (1-based)")]
    NonPositiveDiagonal(Vec<usize>),

    #[error("coefficient tensor is not a Z-tensor: positive off-diagonal entry {value} at stored entry {entry}")]
    NotZTensor { entry: usize, value: f64 },

    #[error("coefficient tensor is not a nonsingular M-tensor (classification: {0})")]
    NotMTensor(String),

    #[error("right side must be nonnegative; component {index} is {value}")]
    NegativeRhs { index: usize, value: f64 },

    #[error("right side must be strictly positive; component {index} is {value}")]
    NonPositiveRhs { index: usize, value: f64 },

    #[error("inner vector has negative component {value} at coordinate {index}; the feasible set may be empty")]
    NegativeInner {
        index: usize,
        value: f64,
        inner: DVector<f64>,
    },

    #[error("invalid starting vector: {0}")]
    InvalidStart(String),

    #[error("starting-point construction failed: {0}")]
    StartConstruction(String),

    #[error("dimension {n} exceeds enumeration limit {limit}")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("rate estimation requires a strictly positive point; component {index} is {value} (reduce the system first)")]
    ZeroComponentAtRatePoint { index: usize, value: f64 },

    #[error("splittings are not comparable: neither Q dominates the other entrywise")]
    IncomparableSplittings,

    #[error("probe failed: {0}")]
    ProbeFailed(String),

    #[error("linear solve with P failed: matrix is numerically singular")]
    SingularP,
}
