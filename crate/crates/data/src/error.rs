use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while reading source files or synthesizing bag datasets.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: bad magic 0x{got:08x}, expected 0x{want:08x}")]
    BadMagic { path: PathBuf, got: u32, want: u32 },

    #[error("{path}: truncated file — needed {need} bytes, found {have}")]
    Truncated {
        path: PathBuf,
        need: usize,
        have: usize,
    },

    #[error("{path}: {extra} trailing bytes after the declared contents")]
    TrailingBytes { path: PathBuf, extra: usize },

    #[error("{path}: file size {len} is not a multiple of the {record}-byte record")]
    BadRecordLength {
        path: PathBuf,
        len: usize,
        record: usize,
    },

    #[error("{path}: label {label} out of range (expected < {classes})")]
    LabelOutOfRange {
        path: PathBuf,
        label: u8,
        classes: u8,
    },

    #[error("image/label count mismatch: {images} images vs {labels} labels")]
    CountMismatch { images: usize, labels: usize },

    #[error("source file not found: {0} (also tried a .gz variant)")]
    MissingFile(PathBuf),

    #[error("insufficient source images: need {need} {what}, have {have}")]
    InsufficientImages {
        what: &'static str,
        need: usize,
        have: usize,
    },

    #[error("{path}: digest mismatch — manifest has {want}, file hashes to {got}")]
    DigestMismatch {
        path: PathBuf,
        want: String,
        got: String,
    },

    #[error("dataset invariant violated: {0}")]
    Invariant(String),

    #[error("manifest mismatch: {0}")]
    Manifest(String),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DataError>;
