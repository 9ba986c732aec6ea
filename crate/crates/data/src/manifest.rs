//! Dataset manifest: a JSON description of a synthesized bag dataset that is
//! complete enough to reconstruct it exactly — seed, every bag's source-image
//! indices and labels, and SHA-256 digests of the source files.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bags::{Bag, BagDataset, Split, Task, POSITIVE_COUNT_WEIGHTS};
use crate::error::{DataError, Result};
use crate::images::{LoadedSource, SourceFile};

pub const MANIFEST_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestSplit {
    pub split: String,
    pub num_bags: usize,
    pub bags: Vec<Bag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub task: String,
    pub seed: u64,
    /// CIFAR only: how many positive instances a positive bag receives.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive_count_distribution: Option<String>,
    pub sources: Vec<SourceFile>,
    pub splits: Vec<ManifestSplit>,
}

impl DatasetManifest {
    /// Builds a manifest from datasets that share one task and seed.
    pub fn from_datasets(datasets: &[&BagDataset]) -> Self {
        let first = datasets.first().expect("at least one dataset");
        let mut sources: Vec<SourceFile> = Vec::new();
        for ds in datasets {
            for file in &ds.provenance {
                if !sources.iter().any(|s| s.role == file.role) {
                    sources.push(file.clone());
                }
            }
        }
        let positive_count_distribution = match first.task {
            Task::Mnist => None,
            Task::Cifar => {
                let [a, b, c, d] = POSITIVE_COUNT_WEIGHTS;
                Some(format!("p(c) proportional to {a}:{b}:{c}:{d} for c in 1..=4"))
            }
        };
        DatasetManifest {
            format_version: MANIFEST_FORMAT_VERSION,
            task: first.task.name().to_string(),
            seed: first.seed,
            positive_count_distribution,
            sources,
            splits: datasets
                .iter()
                .map(|ds| ManifestSplit {
                    split: ds.split.name().to_string(),
                    num_bags: ds.bags.len(),
                    bags: ds.bags.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| DataError::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| DataError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn task(&self) -> Result<Task> {
        Task::from_name(&self.task)
            .ok_or_else(|| DataError::Manifest(format!("unknown task {:?}", self.task)))
    }

    fn split(&self, name: &str) -> Result<&ManifestSplit> {
        self.splits
            .iter()
            .find(|s| s.split == name)
            .ok_or_else(|| DataError::Manifest(format!("missing split {name:?}")))
    }

    /// Confirms that every manifest source digest matches a provided file.
    fn check_sources(&self, provided: &[&LoadedSource]) -> Result<()> {
        for want in &self.sources {
            let found = provided
                .iter()
                .flat_map(|s| s.files.iter())
                .find(|f| f.role == want.role)
                .ok_or_else(|| DataError::Manifest(format!("no source file with role {:?}", want.role)))?;
            if found.sha256 != want.sha256 {
                return Err(DataError::DigestMismatch {
                    path: found.path.clone().into(),
                    want: want.sha256.clone(),
                    got: found.sha256.clone(),
                });
            }
        }
        Ok(())
    }

    fn rebuild_split(
        &self,
        task: Task,
        name: &str,
        source: &Arc<crate::images::ImageSet>,
        provenance: &[SourceFile],
    ) -> Result<BagDataset> {
        let manifest_split = self.split(name)?;
        let split = Split::from_name(name)
            .ok_or_else(|| DataError::Manifest(format!("unknown split {name:?}")))?;
        if manifest_split.num_bags != manifest_split.bags.len() {
            return Err(DataError::Manifest(format!(
                "split {name:?} declares {} bags but lists {}",
                manifest_split.num_bags,
                manifest_split.bags.len()
            )));
        }
        let ds = BagDataset {
            task,
            split,
            seed: self.seed,
            num_classes: task.num_classes(),
            bags: manifest_split.bags.clone(),
            provenance: provenance.to_vec(),
            source: Arc::clone(source),
        };
        ds.verify()?;
        Ok(ds)
    }

    /// Reconstructs the MNIST (train, test) datasets from this manifest.
    pub fn reconstruct_mnist(&self, train: LoadedSource, test: LoadedSource) -> Result<(BagDataset, BagDataset)> {
        if self.task()? != Task::Mnist {
            return Err(DataError::Manifest(format!("task {:?} is not mnist", self.task)));
        }
        self.check_sources(&[&train, &test])?;
        let train_set = Arc::new(train.set);
        let test_set = Arc::new(test.set);
        Ok((
            self.rebuild_split(Task::Mnist, "train", &train_set, &train.files)?,
            self.rebuild_split(Task::Mnist, "test", &test_set, &test.files)?,
        ))
    }

    /// Reconstructs the CIFAR (train, val, test) datasets from this manifest.
    pub fn reconstruct_cifar(
        &self,
        train: LoadedSource,
        test: LoadedSource,
    ) -> Result<(BagDataset, BagDataset, BagDataset)> {
        if self.task()? != Task::Cifar {
            return Err(DataError::Manifest(format!("task {:?} is not cifar", self.task)));
        }
        self.check_sources(&[&train, &test])?;
        let train_set = Arc::new(train.set);
        let test_set = Arc::new(test.set);
        Ok((
            self.rebuild_split(Task::Cifar, "train", &train_set, &train.files)?,
            self.rebuild_split(Task::Cifar, "val", &train_set, &train.files)?,
            self.rebuild_split(Task::Cifar, "test", &test_set, &test.files)?,
        ))
    }
}
