//! CIFAR-10 binary batch format.
//!
//! Each record is 3073 bytes: one label byte (0–9) followed by 3072 pixel
//! bytes — the 32×32 red plane, then green, then blue. Canonical batch files
//! hold 10000 records.

use std::fs;
use std::path::Path;

use crate::error::{DataError, Result};

pub const CIFAR_RECORD_LEN: usize = 3073;
pub const CIFAR_IMAGE_LEN: usize = 3072;
pub const CIFAR_CLASSES: u8 = 10;

/// A decoded CIFAR-10 batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CifarBatch {
    pub labels: Vec<u8>,
    /// `labels.len() * 3072` bytes, image-major, planes R then G then B.
    pub pixels: Vec<u8>,
}

impl CifarBatch {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Parses one CIFAR-10 binary batch file.
pub fn parse_cifar_batch(path: &Path) -> Result<CifarBatch> {
    let bytes = fs::read(path).map_err(|e| DataError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    if bytes.len() % CIFAR_RECORD_LEN != 0 {
        return Err(DataError::BadRecordLength {
            path: path.to_path_buf(),
            len: bytes.len(),
            record: CIFAR_RECORD_LEN,
        });
    }
    let count = bytes.len() / CIFAR_RECORD_LEN;
    let mut labels = Vec::with_capacity(count);
    let mut pixels = Vec::with_capacity(count * CIFAR_IMAGE_LEN);
    for record in bytes.chunks_exact(CIFAR_RECORD_LEN) {
        let label = record[0];
        if label >= CIFAR_CLASSES {
            return Err(DataError::LabelOutOfRange {
                path: path.to_path_buf(),
                label,
                classes: CIFAR_CLASSES,
            });
        }
        labels.push(label);
        pixels.extend_from_slice(&record[1..]);
    }
    Ok(CifarBatch { labels, pixels })
}

/// Writes one CIFAR-10 binary batch file.
pub fn write_cifar_batch(path: &Path, labels: &[u8], pixels: &[u8]) -> Result<()> {
    assert_eq!(
        pixels.len(),
        labels.len() * CIFAR_IMAGE_LEN,
        "pixel payload does not match label count"
    );
    let mut bytes = Vec::with_capacity(labels.len() * CIFAR_RECORD_LEN);
    for (i, &label) in labels.iter().enumerate() {
        bytes.push(label);
        bytes.extend_from_slice(&pixels[i * CIFAR_IMAGE_LEN..(i + 1) * CIFAR_IMAGE_LEN]);
    }
    fs::write(path, bytes).map_err(|e| DataError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
