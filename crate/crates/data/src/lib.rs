//! Source-file parsing and multiple-instance bag dataset synthesis.
//!
//! Reads canonical MNIST IDX files (gzip accepted) and CIFAR-10 binary
//! batches, groups images into labeled bags, and records everything needed to
//! rebuild a dataset exactly in a JSON manifest. A procedural generator can
//! stand in for the source files when they are absent.

mod bags;
mod cifar;
mod error;
mod idx;
mod images;
mod manifest;
mod rng;
mod synth;

pub use bags::{
    make_cifar_bags, make_mnist_bags, Bag, BagDataset, Split, Task, BAG_SIZE, CIFAR_AIRPLANE,
    CIFAR_BAGS_PER_CLASS, CIFAR_BAG_CLASSES, CIFAR_CAR, CIFAR_VAL_HOLDOUT, MNIST_POSITIVE_DIGIT,
    POSITIVE_COUNT_WEIGHTS,
};
pub use cifar::{parse_cifar_batch, write_cifar_batch, CifarBatch, CIFAR_IMAGE_LEN, CIFAR_RECORD_LEN};
pub use error::{DataError, Result};
pub use idx::{
    parse_idx_images, parse_idx_labels, read_file_maybe_gzip, write_idx_images, write_idx_labels,
    IdxImages, IDX_IMAGES_MAGIC, IDX_LABELS_MAGIC,
};
pub use images::{file_sha256, load_cifar, load_mnist, ImageSet, LoadedSource, SourceFile};
pub use manifest::{DatasetManifest, ManifestSplit, MANIFEST_FORMAT_VERSION};
pub use synth::{
    ensure_synthetic_cifar, ensure_synthetic_mnist, CIFAR_FILE_NAMES, MNIST_FILE_NAMES,
    MNIST_TEST_COUNTS, MNIST_TRAIN_COUNTS, SYNTH_VERSION,
};
