use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree overflow: a {lhs}-form wedged with a {rhs}-form exceeds degree 5")]
    DegreeOverflow { lhs: usize, rhs: usize },

    #[error("expected a form of degree {expected}, got degree {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid multi-index {0:?}: indices must be strictly increasing and < 5")]
    InvalidIndex(Vec<usize>),

    #[error("basis is not orthonormal (max Gram residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("point is off the model (constraint residual {residual:.3e})")]
    OffManifold { residual: f64 },

    #[error("vector is not tangent at the base point (residual {residual:.3e})")]
    NotTangent { residual: f64 },

    #[error("point {point:?} is outside the chart or within {margin:e} of its boundary")]
    OutsideChart { point: Vec<f64>, margin: f64 },

    #[error("metric is not positive definite at {0:?}")]
    NotPositiveDefinite(Vec<f64>),

    #[error("hyperbolic sheet violated: x1 = {x1:e}")]
    SheetViolation { x1: f64 },

    #[error("seed axis and fallback axis are both degenerate")]
    DegenerateFrame,

    #[error("retraction chart evaluated at |t| = {norm:.3e}, beyond radius {limit}")]
    ChartRadius { norm: f64, limit: f64 },

    #[error("vectors are based at different points of T¹M")]
    BaseMismatch,

    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),

    #[error("vector field is not unit length (|X| = {norm})")]
    NotUnit { norm: f64 },

    #[error("shape matrix column 0 does not vanish (residual {residual:.3e})")]
    ShapeColumn { residual: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
