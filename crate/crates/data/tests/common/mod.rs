// Shared across test binaries; not every binary uses every helper.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

/// Directory holding generated MNIST source files, created once per process.
pub fn mnist_dir() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("agp-data-tests-mnist-v{}", agp_data::SYNTH_VERSION));
        agp_data::ensure_synthetic_mnist(&dir).expect("generate mnist source");
        dir
    })
}

/// Directory holding generated CIFAR source files, created once per process.
pub fn cifar_dir() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("agp-data-tests-cifar-v{}", agp_data::SYNTH_VERSION));
        agp_data::ensure_synthetic_cifar(&dir).expect("generate cifar source");
        dir
    })
}
