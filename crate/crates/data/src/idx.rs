//! IDX file format (MNIST source files), with transparent gzip support.
//!
//! Layout: a big-endian `u32` magic whose low byte is the dimension count
//! (`0x00000803` for 3-D image tensors, `0x00000801` for 1-D label vectors),
//! followed by one big-endian `u32` extent per dimension, followed by the raw
//! `u8` payload in row-major order.

use std::fs;
use std::io::Read;
use std::path::Path;

use crate::error::{DataError, Result};

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

/// A decoded IDX image file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxImages {
    pub count: usize,
    pub height: usize,
    pub width: usize,
    /// `count * height * width` bytes, image-major.
    pub pixels: Vec<u8>,
}

fn io_err(path: &Path, source: std::io::Error) -> DataError {
    DataError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Reads a file fully, decompressing when the gzip signature `1f 8b` leads.
pub fn read_file_maybe_gzip(path: &Path) -> Result<Vec<u8>> {
    let raw = fs::read(path).map_err(|e| io_err(path, e))?;
    if raw.len() >= 2 && raw[0] == 0x1f && raw[1] == 0x8b {
        let mut out = Vec::new();
        flate2::read::GzDecoder::new(raw.as_slice())
            .read_to_end(&mut out)
            .map_err(|e| io_err(path, e))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

fn be_u32(bytes: &[u8], offset: usize, path: &Path) -> Result<u32> {
    let end = offset + 4;
    if bytes.len() < end {
        return Err(DataError::Truncated {
            path: path.to_path_buf(),
            need: end,
            have: bytes.len(),
        });
    }
    Ok(u32::from_be_bytes([
        bytes[offset],
        bytes[offset + 1],
        bytes[offset + 2],
        bytes[offset + 3],
    ]))
}

fn check_payload(bytes: &[u8], header: usize, payload: usize, path: &Path) -> Result<()> {
    let need = header + payload;
    if bytes.len() < need {
        return Err(DataError::Truncated {
            path: path.to_path_buf(),
            need,
            have: bytes.len(),
        });
    }
    if bytes.len() > need {
        return Err(DataError::TrailingBytes {
            path: path.to_path_buf(),
            extra: bytes.len() - need,
        });
    }
    Ok(())
}

/// Parses an IDX image file (magic `0x00000803`).
pub fn parse_idx_images(path: &Path) -> Result<IdxImages> {
    let bytes = read_file_maybe_gzip(path)?;
    let magic = be_u32(&bytes, 0, path)?;
    if magic != IDX_IMAGES_MAGIC {
        return Err(DataError::BadMagic {
            path: path.to_path_buf(),
            got: magic,
            want: IDX_IMAGES_MAGIC,
        });
    }
    let count = be_u32(&bytes, 4, path)? as usize;
    let height = be_u32(&bytes, 8, path)? as usize;
    let width = be_u32(&bytes, 12, path)? as usize;
    check_payload(&bytes, 16, count * height * width, path)?;
    Ok(IdxImages {
        count,
        height,
        width,
        pixels: bytes[16..].to_vec(),
    })
}

/// Parses an IDX label file (magic `0x00000801`).
pub fn parse_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let bytes = read_file_maybe_gzip(path)?;
    let magic = be_u32(&bytes, 0, path)?;
    if magic != IDX_LABELS_MAGIC {
        return Err(DataError::BadMagic {
            path: path.to_path_buf(),
            got: magic,
            want: IDX_LABELS_MAGIC,
        });
    }
    let count = be_u32(&bytes, 4, path)? as usize;
    check_payload(&bytes, 8, count, path)?;
    Ok(bytes[8..].to_vec())
}

/// Writes an IDX image file (uncompressed).
pub fn write_idx_images(path: &Path, height: usize, width: usize, pixels: &[u8]) -> Result<()> {
    assert_eq!(pixels.len() % (height * width), 0, "ragged image payload");
    let count = pixels.len() / (height * width);
    let mut bytes = Vec::with_capacity(16 + pixels.len());
    bytes.extend_from_slice(&IDX_IMAGES_MAGIC.to_be_bytes());
    bytes.extend_from_slice(&(count as u32).to_be_bytes());
    bytes.extend_from_slice(&(height as u32).to_be_bytes());
    bytes.extend_from_slice(&(width as u32).to_be_bytes());
    bytes.extend_from_slice(pixels);
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

/// Writes an IDX label file (uncompressed).
pub fn write_idx_labels(path: &Path, labels: &[u8]) -> Result<()> {
    let mut bytes = Vec::with_capacity(8 + labels.len());
    bytes.extend_from_slice(&IDX_LABELS_MAGIC.to_be_bytes());
    bytes.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    bytes.extend_from_slice(labels);
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}
