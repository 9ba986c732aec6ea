//! In-memory labeled image collections and the on-disk loaders that fill
//! them from canonical MNIST / CIFAR-10 files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cifar::{parse_cifar_batch, CIFAR_IMAGE_LEN};
use crate::error::{DataError, Result};
use crate::idx::{parse_idx_images, parse_idx_labels};

/// A dense set of same-shaped `u8` images with one class label each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageSet {
    channels: usize,
    height: usize,
    width: usize,
    pixels: Vec<u8>,
    labels: Vec<u8>,
}

impl ImageSet {
    pub fn new(channels: usize, height: usize, width: usize) -> Self {
        Self {
            channels,
            height,
            width,
            pixels: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// (channels, height, width) of every image in the set.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn image_len(&self) -> usize {
        self.channels * self.height * self.width
    }

    pub fn push(&mut self, pixels: &[u8], label: u8) {
        assert_eq!(pixels.len(), self.image_len(), "image has the wrong shape");
        self.pixels.extend_from_slice(pixels);
        self.labels.push(label);
    }

    pub fn image(&self, index: usize) -> &[u8] {
        let len = self.image_len();
        &self.pixels[index * len..(index + 1) * len]
    }

    pub fn label(&self, index: usize) -> u8 {
        self.labels[index]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Count of images per class label (length = max label + 1).
    pub fn class_histogram(&self) -> Vec<usize> {
        let classes = self.labels.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut hist = vec![0usize; classes];
        for &l in &self.labels {
            hist[l as usize] += 1;
        }
        hist
    }
}

/// Identity of one source file: where it came from and its SHA-256 digest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFile {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// An [`ImageSet`] together with the provenance of the files it came from.
#[derive(Debug, Clone)]
pub struct LoadedSource {
    pub set: ImageSet,
    pub files: Vec<SourceFile>,
}

/// SHA-256 of a file's bytes as stored on disk, hex-encoded.
pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| DataError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Resolves `name` under `dir`, accepting a `.gz` sibling.
fn resolve(dir: &Path, name: &str) -> Result<PathBuf> {
    let plain = dir.join(name);
    if plain.is_file() {
        return Ok(plain);
    }
    let gz = dir.join(format!("{name}.gz"));
    if gz.is_file() {
        return Ok(gz);
    }
    Err(DataError::MissingFile(plain))
}

fn source_file(role: &str, path: &Path) -> Result<SourceFile> {
    Ok(SourceFile {
        role: role.to_string(),
        path: path.to_string_lossy().into_owned(),
        sha256: file_sha256(path)?,
    })
}

fn load_mnist_split(dir: &Path, role: &str, images_name: &str, labels_name: &str) -> Result<LoadedSource> {
    let images_path = resolve(dir, images_name)?;
    let labels_path = resolve(dir, labels_name)?;
    let images = parse_idx_images(&images_path)?;
    let labels = parse_idx_labels(&labels_path)?;
    if images.count != labels.len() {
        return Err(DataError::CountMismatch {
            images: images.count,
            labels: labels.len(),
        });
    }
    let mut set = ImageSet::new(1, images.height, images.width);
    set.pixels = images.pixels;
    set.labels = labels;
    Ok(LoadedSource {
        set,
        files: vec![
            source_file(&format!("{role}-images"), &images_path)?,
            source_file(&format!("{role}-labels"), &labels_path)?,
        ],
    })
}

/// Loads the four canonical MNIST files from `dir` → (train, test).
pub fn load_mnist(dir: &Path) -> Result<(LoadedSource, LoadedSource)> {
    let train = load_mnist_split(dir, "train", "train-images-idx3-ubyte", "train-labels-idx1-ubyte")?;
    let test = load_mnist_split(dir, "test", "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte")?;
    Ok((train, test))
}

/// Loads the six canonical CIFAR-10 batch files → (train 50k, test 10k).
///
/// Accepts the files directly under `dir` or under `dir/cifar-10-batches-bin`.
pub fn load_cifar(dir: &Path) -> Result<(LoadedSource, LoadedSource)> {
    let root = {
        let sub = dir.join("cifar-10-batches-bin");
        if sub.is_dir() {
            sub
        } else {
            dir.to_path_buf()
        }
    };
    let mut train = LoadedSource {
        set: ImageSet::new(3, 32, 32),
        files: Vec::new(),
    };
    for i in 1..=5 {
        let name = format!("data_batch_{i}.bin");
        let path = root.join(&name);
        if !path.is_file() {
            return Err(DataError::MissingFile(path));
        }
        let batch = parse_cifar_batch(&path)?;
        train.set.pixels.extend_from_slice(&batch.pixels);
        train.set.labels.extend_from_slice(&batch.labels);
        train.files.push(source_file(&format!("train-batch-{i}"), &path)?);
    }
    let test_path = root.join("test_batch.bin");
    if !test_path.is_file() {
        return Err(DataError::MissingFile(test_path));
    }
    let batch = parse_cifar_batch(&test_path)?;
    let mut test_set = ImageSet::new(3, 32, 32);
    test_set.pixels = batch.pixels;
    test_set.labels = batch.labels;
    debug_assert_eq!(test_set.pixels.len(), test_set.labels.len() * CIFAR_IMAGE_LEN);
    Ok((
        train,
        LoadedSource {
            set: test_set,
            files: vec![source_file("test-batch", &test_path)?],
        },
    ))
}
