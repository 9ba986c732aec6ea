use thiserror::Error;

/// Errors produced by tensor construction, ops, and the backward pass.
#[derive(Debug, Clone, Error)]
pub enum TensorError {
    #[error("{op}: shape mismatch {lhs:?} vs {rhs:?}")]
    ShapeMismatch {
        op: &'static str,
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },

    #[error("shape {shape:?} implies {expected} elements, got {got}")]
    DataLength {
        shape: Vec<usize>,
        expected: usize,
        got: usize,
    },

    #[error("{op}: expected {expected}, got shape {got:?}")]
    InvalidShape {
        op: &'static str,
        expected: &'static str,
        got: Vec<usize>,
    },

    #[error("matrix is not positive definite: pivot {index} has value {value:e}")]
    NotPositiveDefinite { index: usize, value: f64 },

    #[error("triangular solve: zero diagonal at index {index}")]
    SingularTriangular { index: usize },

    #[error("{op}: index {index} out of bounds for extent {extent}")]
    IndexOutOfBounds {
        op: &'static str,
        index: usize,
        extent: usize,
    },

    #[error("backward requires a scalar root, got shape {shape:?}")]
    NonScalarRoot { shape: Vec<usize> },

    #[error("backward root does not participate in the gradient graph")]
    DetachedRoot,

    #[error("{0}: empty input")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, TensorError>;
