use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by model construction, training, and checkpointing.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Tensor(#[from] agp_tensor::TensorError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("covariance not positive definite even with jitter {jitter:e} (pivot {index}: {value:e})")]
    JitterExhausted {
        jitter: f64,
        index: usize,
        value: f64,
    },

    #[error("non-finite {what} at epoch {epoch}, bag {bag}")]
    NonFinite {
        what: String,
        epoch: usize,
        bag: usize,
    },

    #[error("non-finite gradient for parameter {name}")]
    NonFiniteGradient { name: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("checkpoint mismatch: {0}")]
    Checkpoint(String),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ModelError>;
