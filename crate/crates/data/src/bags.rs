//! Multiple-instance bag synthesis.
//!
//! MNIST task: every source image lands in exactly one bag of 9 (a short
//! remainder bag absorbs the leftover), and a bag is positive iff it contains
//! at least one instance of digit 0.
//!
//! CIFAR task: three bag classes — `negative`, `airplane`, `car` — with equal
//! bag counts per class and a small positive-instance count per positive bag.
//! Positive instances are drawn without replacement within a split. Negative
//! instances come from a recycling sampler: a seeded shuffle of the split's
//! negative pool that is reshuffled and reused only once exhausted, because
//! the mandated bag counts need more negative instances than the pools hold.
//! No image ever appears twice inside one bag, and the train/val/test pools
//! are disjoint.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DataError, Result};
use crate::images::{ImageSet, LoadedSource, SourceFile};
use crate::rng::{stream_rng, STREAM_DATA};

pub const BAG_SIZE: usize = 9;
pub const MNIST_POSITIVE_DIGIT: u8 = 0;
/// Bag-class names for the CIFAR task, indexed by bag label.
pub const CIFAR_BAG_CLASSES: [&str; 3] = ["negative", "airplane", "car"];
/// CIFAR source labels of the two positive classes (airplane, automobile).
pub const CIFAR_AIRPLANE: u8 = 0;
pub const CIFAR_CAR: u8 = 1;
/// Images held out from the CIFAR train pool for validation bags.
pub const CIFAR_VAL_HOLDOUT: usize = 10_000;
/// Bags per class for the CIFAR train/val/test splits.
pub const CIFAR_BAGS_PER_CLASS: [usize; 3] = [1481, 370, 370];
/// Weights of drawing 1, 2, 3, or 4 positive instances into a positive bag.
pub const POSITIVE_COUNT_WEIGHTS: [u32; 4] = [40, 17, 4, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Mnist,
    Cifar,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Mnist => "mnist",
            Task::Cifar => "cifar",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "mnist" => Some(Task::Mnist),
            "cifar" => Some(Task::Cifar),
            _ => None,
        }
    }

    pub fn num_classes(self) -> usize {
        match self {
            Task::Mnist => 2,
            Task::Cifar => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "train" => Some(Split::Train),
            "val" => Some(Split::Val),
            "test" => Some(Split::Test),
            _ => None,
        }
    }
}

/// One bag: an identifier, a bag-level label, and the source-image indices of
/// its instances together with their held-out instance labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bag {
    pub id: String,
    pub label: u8,
    pub instances: Vec<u32>,
    pub instance_labels: Vec<u8>,
}

impl Bag {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// A full split of bags over one source image set.
#[derive(Debug, Clone)]
pub struct BagDataset {
    pub task: Task,
    pub split: Split,
    pub seed: u64,
    pub num_classes: usize,
    pub bags: Vec<Bag>,
    pub provenance: Vec<SourceFile>,
    pub(crate) source: Arc<ImageSet>,
}

impl BagDataset {
    pub fn source(&self) -> &ImageSet {
        &self.source
    }

    pub fn source_arc(&self) -> Arc<ImageSet> {
        Arc::clone(&self.source)
    }

    /// (channels, height, width) of each instance image.
    pub fn image_dims(&self) -> (usize, usize, usize) {
        self.source.dims()
    }

    /// The bag's pixel block as `N × C × H × W` floats in `[0, 1]`.
    pub fn bag_pixels(&self, bag: &Bag) -> Vec<f64> {
        let mut out = Vec::with_capacity(bag.len() * self.source.image_len());
        for &index in &bag.instances {
            out.extend(
                self.source
                    .image(index as usize)
                    .iter()
                    .map(|&b| f64::from(b) / 255.0),
            );
        }
        out
    }

    /// Bag counts per bag label (length `num_classes`).
    pub fn label_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0usize; self.num_classes];
        for bag in &self.bags {
            hist[bag.label as usize] += 1;
        }
        hist
    }

    /// Checks label/content consistency for every bag.
    ///
    /// MNIST: bag label 1 ⇔ some instance is digit 0, all bags disjoint.
    /// CIFAR: positive bags hold ≥1 of their class and none of the other
    /// positive class; negative bags hold neither. Within-bag indices are
    /// always distinct.
    pub fn verify(&self) -> Result<()> {
        let bad = |msg: String| Err(DataError::Invariant(msg));
        let mut seen = vec![false; self.source.len()];
        for bag in &self.bags {
            if bag.instances.len() != bag.instance_labels.len() {
                return bad(format!("bag {}: index/label length mismatch", bag.id));
            }
            let mut in_bag: Vec<u32> = Vec::with_capacity(bag.len());
            for (&index, &label) in bag.instances.iter().zip(&bag.instance_labels) {
                let i = index as usize;
                if i >= self.source.len() {
                    return bad(format!("bag {}: index {i} out of range", bag.id));
                }
                if self.source.label(i) != label {
                    return bad(format!("bag {}: stored instance label disagrees with source", bag.id));
                }
                if in_bag.contains(&index) {
                    return bad(format!("bag {}: duplicate instance {i}", bag.id));
                }
                in_bag.push(index);
                if self.task == Task::Mnist {
                    if seen[i] {
                        return bad(format!("bag {}: image {i} already used by another bag", bag.id));
                    }
                    seen[i] = true;
                }
            }
            match self.task {
                Task::Mnist => {
                    let positive = bag.instance_labels.iter().any(|&d| d == MNIST_POSITIVE_DIGIT);
                    if (bag.label == 1) != positive {
                        return bad(format!("bag {}: label {} inconsistent with contents", bag.id, bag.label));
                    }
                }
                Task::Cifar => {
                    let airplanes = bag.instance_labels.iter().filter(|&&l| l == CIFAR_AIRPLANE).count();
                    let cars = bag.instance_labels.iter().filter(|&&l| l == CIFAR_CAR).count();
                    let ok = match bag.label {
                        0 => airplanes == 0 && cars == 0,
                        1 => airplanes >= 1 && cars == 0,
                        2 => cars >= 1 && airplanes == 0,
                        _ => false,
                    };
                    if !ok {
                        return bad(format!(
                            "bag {}: label {} with {airplanes} airplanes / {cars} cars",
                            bag.id, bag.label
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Draws 1–4 with probability proportional to [`POSITIVE_COUNT_WEIGHTS`].
fn sample_positive_count(rng: &mut ChaCha12Rng) -> usize {
    let total: u32 = POSITIVE_COUNT_WEIGHTS.iter().sum();
    let mut u = rng.gen_range(0..total);
    for (i, &w) in POSITIVE_COUNT_WEIGHTS.iter().enumerate() {
        if u < w {
            return i + 1;
        }
        u -= w;
    }
    POSITIVE_COUNT_WEIGHTS.len()
}

/// Endless distinct draws from a finite pool: consumes a shuffled pool
/// without replacement and reshuffles only once it runs dry.
struct RecyclingSampler {
    items: Vec<u32>,
    cursor: usize,
}

impl RecyclingSampler {
    fn new(items: Vec<u32>) -> Self {
        Self { items, cursor: 0 }
    }

    /// Next item not present in `exclude`. Requires `exclude.len() < items.len()`.
    fn draw_distinct(&mut self, exclude: &[u32], rng: &mut ChaCha12Rng) -> u32 {
        loop {
            if self.cursor == self.items.len() {
                self.items.shuffle(rng);
                self.cursor = 0;
            }
            match (self.cursor..self.items.len()).find(|&j| !exclude.contains(&self.items[j])) {
                Some(j) => {
                    self.items.swap(self.cursor, j);
                    let item = self.items[self.cursor];
                    self.cursor += 1;
                    return item;
                }
                None => {
                    // Everything left this cycle is already in the bag; start
                    // a fresh cycle over the whole pool.
                    self.items.shuffle(rng);
                    self.cursor = 0;
                }
            }
        }
    }
}

fn make_bag(set: &ImageSet, prefix: &str, index: usize, label: u8, instances: Vec<u32>) -> Bag {
    let instance_labels = instances.iter().map(|&i| set.label(i as usize)).collect();
    Bag {
        id: format!("{prefix}-{index:05}"),
        label,
        instances,
        instance_labels,
    }
}

fn partition_into_bags(set: &ImageSet, rng: &mut ChaCha12Rng, prefix: &str) -> Vec<Bag> {
    let mut indices: Vec<u32> = (0..set.len() as u32).collect();
    indices.shuffle(rng);
    indices
        .chunks(BAG_SIZE)
        .enumerate()
        .map(|(i, chunk)| {
            let positive = chunk
                .iter()
                .any(|&ix| set.label(ix as usize) == MNIST_POSITIVE_DIGIT);
            make_bag(set, prefix, i, positive as u8, chunk.to_vec())
        })
        .collect()
}

/// Groups the MNIST train/test images into disjoint bags of 9 (the final
/// short bag takes the remainder) → (train, test) datasets.
pub fn make_mnist_bags(train: LoadedSource, test: LoadedSource, seed: u64) -> Result<(BagDataset, BagDataset)> {
    let mut rng = stream_rng(seed, STREAM_DATA);
    let train_set = Arc::new(train.set);
    let test_set = Arc::new(test.set);
    let train_bags = partition_into_bags(&train_set, &mut rng, "mnist-train");
    let test_bags = partition_into_bags(&test_set, &mut rng, "mnist-test");
    let train_ds = BagDataset {
        task: Task::Mnist,
        split: Split::Train,
        seed,
        num_classes: 2,
        bags: train_bags,
        provenance: train.files,
        source: train_set,
    };
    let test_ds = BagDataset {
        task: Task::Mnist,
        split: Split::Test,
        seed,
        num_classes: 2,
        bags: test_bags,
        provenance: test.files,
        source: test_set,
    };
    train_ds.verify()?;
    test_ds.verify()?;
    Ok((train_ds, test_ds))
}

fn build_cifar_split(
    set: &ImageSet,
    pool: &[u32],
    bags_per_class: usize,
    rng: &mut ChaCha12Rng,
    prefix: &str,
) -> Result<Vec<Bag>> {
    let mut airplanes = Vec::new();
    let mut cars = Vec::new();
    let mut negatives = Vec::new();
    for &index in pool {
        match set.label(index as usize) {
            l if l == CIFAR_AIRPLANE => airplanes.push(index),
            l if l == CIFAR_CAR => cars.push(index),
            _ => negatives.push(index),
        }
    }
    airplanes.shuffle(rng);
    cars.shuffle(rng);
    negatives.shuffle(rng);
    if negatives.len() < BAG_SIZE {
        return Err(DataError::InsufficientImages {
            what: "negative-class images",
            need: BAG_SIZE,
            have: negatives.len(),
        });
    }
    let mut negative_pool = RecyclingSampler::new(negatives);
    let mut cursors = [0usize; 2];
    let mut bags: Vec<(u8, Vec<u32>)> = Vec::with_capacity(3 * bags_per_class);
    for (lane_index, (bag_label, lane, what)) in [
        (1u8, &airplanes, "airplane images"),
        (2u8, &cars, "car images"),
    ]
    .into_iter()
    .enumerate()
    {
        for _ in 0..bags_per_class {
            let count = sample_positive_count(rng);
            let cursor = &mut cursors[lane_index];
            if *cursor + count > lane.len() {
                return Err(DataError::InsufficientImages {
                    what,
                    need: *cursor + count,
                    have: lane.len(),
                });
            }
            let mut members = lane[*cursor..*cursor + count].to_vec();
            *cursor += count;
            while members.len() < BAG_SIZE {
                let next = negative_pool.draw_distinct(&members, rng);
                members.push(next);
            }
            members.shuffle(rng);
            bags.push((bag_label, members));
        }
    }
    for _ in 0..bags_per_class {
        let mut members = Vec::with_capacity(BAG_SIZE);
        while members.len() < BAG_SIZE {
            let next = negative_pool.draw_distinct(&members, rng);
            members.push(next);
        }
        bags.push((0, members));
    }
    bags.shuffle(rng);
    Ok(bags
        .into_iter()
        .enumerate()
        .map(|(i, (label, members))| make_bag(set, prefix, i, label, members))
        .collect())
}

/// Builds the three CIFAR bag splits → (train, val, test).
///
/// A seeded 10k-image holdout of the 50k train pool feeds the validation
/// bags; the canonical test images feed the test bags. Train/val/test use
/// 1481/370/370 bags per class.
pub fn make_cifar_bags(
    train: LoadedSource,
    test: LoadedSource,
    seed: u64,
) -> Result<(BagDataset, BagDataset, BagDataset)> {
    let mut rng = stream_rng(seed, STREAM_DATA);
    let train_set = Arc::new(train.set);
    let test_set = Arc::new(test.set);
    if train_set.len() < CIFAR_VAL_HOLDOUT + BAG_SIZE {
        return Err(DataError::InsufficientImages {
            what: "train-pool images",
            need: CIFAR_VAL_HOLDOUT + BAG_SIZE,
            have: train_set.len(),
        });
    }
    let mut all: Vec<u32> = (0..train_set.len() as u32).collect();
    all.shuffle(&mut rng);
    let (val_pool, train_pool) = all.split_at(CIFAR_VAL_HOLDOUT);
    let train_bags = build_cifar_split(&train_set, train_pool, CIFAR_BAGS_PER_CLASS[0], &mut rng, "cifar-train")?;
    let val_bags = build_cifar_split(&train_set, val_pool, CIFAR_BAGS_PER_CLASS[1], &mut rng, "cifar-val")?;
    let test_pool: Vec<u32> = (0..test_set.len() as u32).collect();
    let test_bags = build_cifar_split(&test_set, &test_pool, CIFAR_BAGS_PER_CLASS[2], &mut rng, "cifar-test")?;
    let make = |split, bags, provenance: &[SourceFile], source: &Arc<ImageSet>| BagDataset {
        task: Task::Cifar,
        split,
        seed,
        num_classes: 3,
        bags,
        provenance: provenance.to_vec(),
        source: Arc::clone(source),
    };
    let train_ds = make(Split::Train, train_bags, &train.files, &train_set);
    let val_ds = make(Split::Val, val_bags, &train.files, &train_set);
    let test_ds = make(Split::Test, test_bags, &test.files, &test_set);
    train_ds.verify()?;
    val_ds.verify()?;
    test_ds.verify()?;
    Ok((train_ds, val_ds, test_ds))
}
