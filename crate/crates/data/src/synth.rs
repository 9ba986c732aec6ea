//! Procedural stand-ins for the canonical source files.
//!
//! When the real MNIST / CIFAR-10 files are not on disk, these generators
//! write class-structured images in the exact canonical binary formats (IDX
//! and 3073-byte-record batches) with the canonical image counts, so every
//! parser, bag builder, and training run works unchanged. The files are
//! produced once with a fixed internal seed — run seeds never change the
//! source corpus, only what is built from it.
//!
//! MNIST images are rendered glyphs: per-digit stroke skeletons with jittered
//! control points, a random affine pose, Gaussian stroke profiles, occasional
//! disc erasures, and pixel noise. The erasures and pose jitter make a small
//! fraction of instances genuinely ambiguous (a tailless 9 approaches a 0),
//! which keeps the learning task nontrivial.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::cifar::{write_cifar_batch, CIFAR_IMAGE_LEN};
use crate::error::{DataError, Result};
use crate::idx::{write_idx_images, write_idx_labels};
use crate::rng::stream_rng;

/// Per-digit image counts of the canonical MNIST train split.
pub const MNIST_TRAIN_COUNTS: [usize; 10] =
    [5923, 6742, 5958, 6131, 5842, 5421, 5918, 6265, 5851, 5949];
/// Per-digit image counts of the canonical MNIST test split.
pub const MNIST_TEST_COUNTS: [usize; 10] =
    [980, 1135, 1032, 1010, 982, 892, 958, 1028, 974, 1009];

pub const MNIST_FILE_NAMES: [&str; 4] = [
    "train-images-idx3-ubyte",
    "train-labels-idx1-ubyte",
    "t10k-images-idx3-ubyte",
    "t10k-labels-idx1-ubyte",
];

pub const CIFAR_FILE_NAMES: [&str; 6] = [
    "data_batch_1.bin",
    "data_batch_2.bin",
    "data_batch_3.bin",
    "data_batch_4.bin",
    "data_batch_5.bin",
    "test_batch.bin",
];

/// Revision of the generators below. Callers that cache generated files in a
/// shared location include this in the path so renderer changes are not
/// masked by stale caches.
pub const SYNTH_VERSION: u32 = 1;

/// Fixed seed for source-file generation; run seeds do not reach it.
const SOURCE_SEED: u64 = 0xDA7A_5EED;
const MNIST_STREAM: u64 = 1;
const CIFAR_STREAM: u64 = 2;

// ---------------------------------------------------------------------------
// MNIST glyph renderer
// ---------------------------------------------------------------------------

/// Difficulty knobs. Chosen so a small CNN separates the digits well but not
/// perfectly — a few percent of instances are ambiguous.
const ERASE_PROB: f64 = 0.14;
const ERASE_RADIUS: (f64, f64) = (2.0, 4.5);
const NOISE_SIGMA: f64 = 9.0;
const POINT_JITTER: f64 = 0.022;

const SIDE: usize = 28;

#[derive(Clone, Copy)]
enum Stroke {
    Line {
        from: (f64, f64),
        to: (f64, f64),
    },
    Arc {
        center: (f64, f64),
        rx: f64,
        ry: f64,
        start: f64,
        end: f64,
    },
}

use Stroke::{Arc, Line};

/// Stroke skeletons in a unit box, x right and y down.
fn digit_strokes(digit: u8) -> Vec<Stroke> {
    match digit {
        0 => vec![Arc {
            center: (0.50, 0.50),
            rx: 0.30,
            ry: 0.42,
            start: 0.0,
            end: 2.0 * PI,
        }],
        1 => vec![
            Line { from: (0.52, 0.10), to: (0.52, 0.90) },
            Line { from: (0.52, 0.10), to: (0.38, 0.26) },
        ],
        2 => vec![
            Arc {
                center: (0.50, 0.32),
                rx: 0.26,
                ry: 0.22,
                start: PI,
                end: 2.25 * PI,
            },
            Line { from: (0.72, 0.45), to: (0.26, 0.88) },
            Line { from: (0.26, 0.88), to: (0.78, 0.88) },
        ],
        3 => vec![
            Arc {
                center: (0.45, 0.30),
                rx: 0.26,
                ry: 0.20,
                start: 1.10 * PI,
                end: 2.50 * PI,
            },
            Arc {
                center: (0.45, 0.68),
                rx: 0.28,
                ry: 0.22,
                start: 1.50 * PI,
                end: 2.90 * PI,
            },
        ],
        4 => vec![
            Line { from: (0.62, 0.08), to: (0.62, 0.92) },
            Line { from: (0.58, 0.10), to: (0.22, 0.58) },
            Line { from: (0.22, 0.58), to: (0.82, 0.58) },
        ],
        5 => vec![
            Line { from: (0.72, 0.10), to: (0.32, 0.10) },
            Line { from: (0.32, 0.10), to: (0.30, 0.45) },
            Arc {
                center: (0.47, 0.65),
                rx: 0.26,
                ry: 0.24,
                start: 1.20 * PI,
                end: 2.70 * PI,
            },
        ],
        6 => vec![
            Line { from: (0.64, 0.10), to: (0.48, 0.32) },
            Line { from: (0.48, 0.32), to: (0.38, 0.55) },
            Arc {
                center: (0.48, 0.68),
                rx: 0.22,
                ry: 0.20,
                start: 0.0,
                end: 2.0 * PI,
            },
        ],
        7 => vec![
            Line { from: (0.24, 0.12), to: (0.76, 0.12) },
            Line { from: (0.76, 0.12), to: (0.42, 0.90) },
        ],
        8 => vec![
            Arc {
                center: (0.50, 0.30),
                rx: 0.20,
                ry: 0.18,
                start: 0.0,
                end: 2.0 * PI,
            },
            Arc {
                center: (0.50, 0.68),
                rx: 0.24,
                ry: 0.21,
                start: 0.0,
                end: 2.0 * PI,
            },
        ],
        9 => vec![
            Arc {
                center: (0.48, 0.34),
                rx: 0.22,
                ry: 0.20,
                start: 0.0,
                end: 2.0 * PI,
            },
            Line { from: (0.70, 0.38), to: (0.60, 0.90) },
        ],
        _ => unreachable!("digit out of range"),
    }
}

fn jittered(stroke: Stroke, noise: &Normal<f64>, rng: &mut ChaCha12Rng) -> Stroke {
    let mut j = |v: f64| v + noise.sample(rng);
    match stroke {
        Line { from, to } => Line {
            from: (j(from.0), j(from.1)),
            to: (j(to.0), j(to.1)),
        },
        Arc {
            center,
            rx,
            ry,
            start,
            end,
        } => Arc {
            center: (j(center.0), j(center.1)),
            rx: rx * (1.0 + 3.0 * noise.sample(rng)),
            ry: ry * (1.0 + 3.0 * noise.sample(rng)),
            start: start + 4.0 * noise.sample(rng),
            end: end + 4.0 * noise.sample(rng),
        },
    }
}

/// Samples points along a stroke roughly every 0.015 box units.
fn sample_stroke(stroke: &Stroke, out: &mut Vec<(f64, f64)>) {
    const STEP: f64 = 0.015;
    match *stroke {
        Line { from, to } => {
            let len = ((to.0 - from.0).powi(2) + (to.1 - from.1).powi(2)).sqrt();
            let n = (len / STEP).ceil().max(1.0) as usize;
            for i in 0..=n {
                let t = i as f64 / n as f64;
                out.push((from.0 + t * (to.0 - from.0), from.1 + t * (to.1 - from.1)));
            }
        }
        Arc {
            center,
            rx,
            ry,
            start,
            end,
        } => {
            let span = (end - start).abs();
            let n = ((span * rx.max(ry)) / STEP).ceil().max(1.0) as usize;
            for i in 0..=n {
                let a = start + (end - start) * i as f64 / n as f64;
                out.push((center.0 + rx * a.cos(), center.1 + ry * a.sin()));
            }
        }
    }
}

fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    v.max(lo).min(hi)
}

/// Renders one 28×28 digit image.
fn render_digit(digit: u8, rng: &mut ChaCha12Rng) -> Vec<u8> {
    let point_noise = Normal::new(0.0, POINT_JITTER).unwrap();
    let pose_noise = Normal::new(0.0, 1.0).unwrap();

    // Skeleton points in pixel coordinates, before the pose transform.
    let mut points = Vec::with_capacity(256);
    for stroke in digit_strokes(digit) {
        let stroke = jittered(stroke, &point_noise, rng);
        sample_stroke(&stroke, &mut points);
    }

    // Random affine pose about the image centre.
    let theta = clamp(0.10 * pose_noise.sample(rng), -0.30, 0.30);
    let sx = clamp(1.0 + 0.07 * pose_noise.sample(rng), 0.82, 1.18);
    let sy = clamp(1.0 + 0.07 * pose_noise.sample(rng), 0.82, 1.18);
    let shear = clamp(0.06 * pose_noise.sample(rng), -0.18, 0.18);
    let tx = clamp(1.0 * pose_noise.sample(rng), -2.5, 2.5);
    let ty = clamp(1.0 * pose_noise.sample(rng), -2.5, 2.5);
    let (sin, cos) = theta.sin_cos();
    let centre = SIDE as f64 / 2.0;

    let thickness = clamp(1.9 + 0.30 * pose_noise.sample(rng), 1.2, 2.8);
    let sigma = thickness / 2.0;
    let window = (2.5 * sigma).ceil() as i64;
    let peak = clamp(220.0 + 25.0 * pose_noise.sample(rng), 140.0, 255.0);

    let mut canvas = vec![0.0f64; SIDE * SIDE];
    for &(ux, uy) in &points {
        // Unit box → 20 px glyph box centred in the image.
        let gx = 4.0 + 20.0 * ux - centre;
        let gy = 4.0 + 20.0 * uy - centre;
        let (gx, gy) = (gx + shear * gy, gy);
        let (gx, gy) = (sx * gx, sy * gy);
        let px = cos * gx - sin * gy + centre + tx;
        let py = sin * gx + cos * gy + centre + ty;
        let (cx, cy) = (px.round() as i64, py.round() as i64);
        for dy in -window..=window {
            for dx in -window..=window {
                let (x, y) = (cx + dx, cy + dy);
                if x < 0 || y < 0 || x >= SIDE as i64 || y >= SIDE as i64 {
                    continue;
                }
                let d2 = (x as f64 - px).powi(2) + (y as f64 - py).powi(2);
                let v = (-d2 / (2.0 * sigma * sigma)).exp();
                let cell = &mut canvas[y as usize * SIDE + x as usize];
                if v > *cell {
                    *cell = v;
                }
            }
        }
    }

    // Occasional soft disc erasure: broken glyphs are the ambiguous cases.
    if rng.gen_bool(ERASE_PROB) {
        let ex = rng.gen_range(7.0..21.0);
        let ey = rng.gen_range(7.0..21.0);
        let er = rng.gen_range(ERASE_RADIUS.0..ERASE_RADIUS.1);
        for y in 0..SIDE {
            for x in 0..SIDE {
                let d2 = (x as f64 - ex).powi(2) + (y as f64 - ey).powi(2);
                let keep = 1.0 - (-d2 / (2.0 * (er / 2.0).powi(2))).exp();
                canvas[y * SIDE + x] *= keep;
            }
        }
    }

    let pixel_noise = Normal::new(0.0, NOISE_SIGMA).unwrap();
    canvas
        .iter()
        .map(|&v| clamp(v * peak + pixel_noise.sample(rng), 0.0, 255.0) as u8)
        .collect()
}

/// A label sequence with exact per-class counts, shuffled; `first` is forced
/// into position 0 (matching the leading label of the canonical train file).
fn label_sequence(counts: &[usize; 10], first: Option<u8>, rng: &mut ChaCha12Rng) -> Vec<u8> {
    let mut labels = Vec::with_capacity(counts.iter().sum());
    for (digit, &count) in counts.iter().enumerate() {
        labels.extend(std::iter::repeat(digit as u8).take(count));
    }
    // Fisher–Yates via the rand crate.
    use rand::seq::SliceRandom;
    labels.shuffle(rng);
    if let Some(first) = first {
        if labels[0] != first {
            let pos = labels.iter().position(|&l| l == first).expect("class present");
            labels.swap(0, pos);
        }
    }
    labels
}

fn write_mnist_split(
    dir: &Path,
    images_name: &str,
    labels_name: &str,
    counts: &[usize; 10],
    first: Option<u8>,
    rng: &mut ChaCha12Rng,
) -> Result<()> {
    let labels = label_sequence(counts, first, rng);
    let mut pixels = Vec::with_capacity(labels.len() * SIDE * SIDE);
    for &label in &labels {
        pixels.extend(render_digit(label, rng));
    }
    write_idx_images(&dir.join(images_name), SIDE, SIDE, &pixels)?;
    write_idx_labels(&dir.join(labels_name), &labels)
}

fn all_present(dir: &Path, names: &[&str]) -> bool {
    names
        .iter()
        .all(|n| dir.join(n).is_file() || dir.join(format!("{n}.gz")).is_file())
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| DataError::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

/// Writes the four MNIST files into `dir` unless they already exist.
/// Returns `true` when files were generated.
pub fn ensure_synthetic_mnist(dir: &Path) -> Result<bool> {
    if all_present(dir, &MNIST_FILE_NAMES) {
        return Ok(false);
    }
    create_dir(dir)?;
    let mut rng = stream_rng(SOURCE_SEED, MNIST_STREAM);
    write_mnist_split(
        dir,
        MNIST_FILE_NAMES[0],
        MNIST_FILE_NAMES[1],
        &MNIST_TRAIN_COUNTS,
        Some(5),
        &mut rng,
    )?;
    write_mnist_split(
        dir,
        MNIST_FILE_NAMES[2],
        MNIST_FILE_NAMES[3],
        &MNIST_TEST_COUNTS,
        None,
        &mut rng,
    )?;
    Ok(true)
}

// ---------------------------------------------------------------------------
// CIFAR-10 motif renderer
// ---------------------------------------------------------------------------

const CSIDE: usize = 32;
const CIFAR_NOISE_SIGMA: f64 = 14.0;

struct Rgb(f64, f64, f64);

struct CifarCanvas {
    /// Planes R, G, B, each 32×32.
    data: [Vec<f64>; 3],
}

impl CifarCanvas {
    fn new() -> Self {
        Self {
            data: [
                vec![0.0; CSIDE * CSIDE],
                vec![0.0; CSIDE * CSIDE],
                vec![0.0; CSIDE * CSIDE],
            ],
        }
    }

    fn fill_gradient(&mut self, top: &Rgb, bottom: &Rgb) {
        for y in 0..CSIDE {
            let t = y as f64 / (CSIDE - 1) as f64;
            let row = [
                top.0 + t * (bottom.0 - top.0),
                top.1 + t * (bottom.1 - top.1),
                top.2 + t * (bottom.2 - top.2),
            ];
            for x in 0..CSIDE {
                for c in 0..3 {
                    self.data[c][y * CSIDE + x] = row[c];
                }
            }
        }
    }

    fn paint(&mut self, x: i64, y: i64, rgb: &Rgb) {
        if x < 0 || y < 0 || x >= CSIDE as i64 || y >= CSIDE as i64 {
            return;
        }
        let i = y as usize * CSIDE + x as usize;
        self.data[0][i] = rgb.0;
        self.data[1][i] = rgb.1;
        self.data[2][i] = rgb.2;
    }

    fn rect(&mut self, x0: i64, y0: i64, x1: i64, y1: i64, rgb: &Rgb) {
        for y in y0..=y1 {
            for x in x0..=x1 {
                self.paint(x, y, rgb);
            }
        }
    }

    fn disc(&mut self, cx: f64, cy: f64, r: f64, rgb: &Rgb) {
        let lo = (cy - r).floor() as i64;
        let hi = (cy + r).ceil() as i64;
        for y in lo..=hi {
            for x in (cx - r).floor() as i64..=(cx + r).ceil() as i64 {
                let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
                if d2 <= r * r {
                    self.paint(x, y, rgb);
                }
            }
        }
    }

    fn triangle(&mut self, a: (f64, f64), b: (f64, f64), c: (f64, f64), rgb: &Rgb) {
        let xs = [a.0, b.0, c.0];
        let ys = [a.1, b.1, c.1];
        let (x0, x1) = (
            xs.iter().cloned().fold(f64::MAX, f64::min).floor() as i64,
            xs.iter().cloned().fold(f64::MIN, f64::max).ceil() as i64,
        );
        let (y0, y1) = (
            ys.iter().cloned().fold(f64::MAX, f64::min).floor() as i64,
            ys.iter().cloned().fold(f64::MIN, f64::max).ceil() as i64,
        );
        let edge = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| {
            (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
        };
        for y in y0..=y1 {
            for x in x0..=x1 {
                let p = (x as f64, y as f64);
                let d0 = edge(a, b, p);
                let d1 = edge(b, c, p);
                let d2 = edge(c, a, p);
                let neg = d0 < 0.0 || d1 < 0.0 || d2 < 0.0;
                let pos = d0 > 0.0 || d1 > 0.0 || d2 > 0.0;
                if !(neg && pos) {
                    self.paint(x, y, rgb);
                }
            }
        }
    }

    fn into_bytes(self, noise: &Normal<f64>, rng: &mut ChaCha12Rng) -> Vec<u8> {
        let mut out = Vec::with_capacity(CIFAR_IMAGE_LEN);
        for plane in &self.data {
            out.extend(
                plane
                    .iter()
                    .map(|&v| clamp(v + noise.sample(rng), 0.0, 255.0) as u8),
            );
        }
        out
    }
}

fn jitter_rgb(base: (f64, f64, f64), rng: &mut ChaCha12Rng) -> Rgb {
    let mut j = |v: f64| clamp(v + rng.gen_range(-20.0..20.0), 0.0, 255.0);
    Rgb(j(base.0), j(base.1), j(base.2))
}

/// Renders one 32×32 RGB image for CIFAR class `label` (canonical order:
/// airplane, automobile, bird, cat, deer, dog, frog, horse, ship, truck).
fn render_cifar(label: u8, rng: &mut ChaCha12Rng) -> Vec<u8> {
    let mut canvas = CifarCanvas::new();
    let dx = rng.gen_range(-3.0..3.0);
    let dy = rng.gen_range(-3.0..3.0);
    let s = rng.gen_range(0.85..1.15);
    match label {
        0 => {
            // Airplane: light fuselage and swept wings on sky.
            canvas.fill_gradient(&jitter_rgb((110.0, 165.0, 230.0), rng), &jitter_rgb((175.0, 205.0, 240.0), rng));
            let body = jitter_rgb((225.0, 225.0, 230.0), rng);
            let cx = 16.0 + dx;
            let cy = 16.0 + dy;
            canvas.rect(
                (cx - 11.0 * s) as i64,
                (cy - 1.5 * s) as i64,
                (cx + 11.0 * s) as i64,
                (cy + 1.5 * s) as i64,
                &body,
            );
            canvas.triangle((cx - 2.0, cy), (cx + 4.0, cy - 8.0 * s), (cx + 6.0, cy), &body);
            canvas.triangle((cx - 2.0, cy), (cx + 4.0, cy + 8.0 * s), (cx + 6.0, cy), &body);
            canvas.triangle((cx - 11.0 * s, cy), (cx - 11.0 * s, cy - 4.0 * s), (cx - 7.0 * s, cy), &body);
        }
        1 => {
            // Automobile: boxy body, cabin, two wheels.
            canvas.fill_gradient(&jitter_rgb((150.0, 150.0, 148.0), rng), &jitter_rgb((95.0, 95.0, 95.0), rng));
            let body = jitter_rgb((180.0, 40.0, 50.0), rng);
            let cx = 16.0 + dx;
            let cy = 18.0 + dy;
            canvas.rect((cx - 10.0 * s) as i64, (cy - 3.0) as i64, (cx + 10.0 * s) as i64, (cy + 3.0) as i64, &body);
            canvas.rect((cx - 5.0 * s) as i64, (cy - 7.0) as i64, (cx + 5.0 * s) as i64, (cy - 3.0) as i64, &body);
            let wheel = Rgb(20.0, 20.0, 22.0);
            canvas.disc(cx - 6.0 * s, cy + 4.0, 2.6, &wheel);
            canvas.disc(cx + 6.0 * s, cy + 4.0, 2.6, &wheel);
        }
        2 => {
            // Bird: round body, beak, wing.
            canvas.fill_gradient(&jitter_rgb((170.0, 200.0, 235.0), rng), &jitter_rgb((200.0, 220.0, 240.0), rng));
            let body = jitter_rgb((150.0, 110.0, 70.0), rng);
            let cx = 16.0 + dx;
            let cy = 16.0 + dy;
            canvas.disc(cx, cy, 6.5 * s, &body);
            canvas.disc(cx + 5.0 * s, cy - 5.0 * s, 3.5 * s, &body);
            canvas.triangle(
                (cx + 8.0 * s, cy - 6.5 * s),
                (cx + 12.0 * s, cy - 5.0 * s),
                (cx + 8.0 * s, cy - 3.5 * s),
                &jitter_rgb((230.0, 180.0, 40.0), rng),
            );
            canvas.triangle((cx - 6.0 * s, cy), (cx + 1.0, cy - 3.0), (cx + 1.0, cy + 3.0), &Rgb(110.0, 80.0, 50.0));
        }
        3 => {
            // Cat: grey head with triangular ears.
            canvas.fill_gradient(&jitter_rgb((175.0, 145.0, 120.0), rng), &jitter_rgb((120.0, 100.0, 85.0), rng));
            let fur = jitter_rgb((140.0, 140.0, 145.0), rng);
            let cx = 16.0 + dx;
            let cy = 17.0 + dy;
            canvas.disc(cx, cy, 7.5 * s, &fur);
            canvas.triangle((cx - 7.0 * s, cy - 3.0), (cx - 6.0 * s, cy - 12.0 * s), (cx - 1.0, cy - 6.0), &fur);
            canvas.triangle((cx + 7.0 * s, cy - 3.0), (cx + 6.0 * s, cy - 12.0 * s), (cx + 1.0, cy - 6.0), &fur);
            let eye = Rgb(40.0, 180.0, 90.0);
            canvas.disc(cx - 3.0, cy - 1.0, 1.2, &eye);
            canvas.disc(cx + 3.0, cy - 1.0, 1.2, &eye);
        }
        4 => {
            // Deer: tan body on forest green, thin legs, small head.
            canvas.fill_gradient(&jitter_rgb((95.0, 135.0, 85.0), rng), &jitter_rgb((70.0, 105.0, 60.0), rng));
            let hide = jitter_rgb((190.0, 150.0, 100.0), rng);
            let cx = 16.0 + dx;
            let cy = 15.0 + dy;
            canvas.rect((cx - 8.0 * s) as i64, (cy - 3.0) as i64, (cx + 6.0 * s) as i64, (cy + 3.0) as i64, &hide);
            canvas.disc(cx + 8.0 * s, cy - 6.0 * s, 3.0, &hide);
            canvas.rect((cx + 6.0 * s) as i64, (cy - 6.0) as i64, (cx + 8.0 * s) as i64, (cy) as i64, &hide);
            for leg in 0..4 {
                let lx = cx - 7.0 * s + 4.0 * leg as f64 * s;
                canvas.rect(lx as i64, (cy + 3.0) as i64, (lx + 1.0) as i64, (cy + 11.0) as i64, &hide);
            }
        }
        5 => {
            // Dog: brown body and head with floppy ear.
            canvas.fill_gradient(&jitter_rgb((115.0, 150.0, 90.0), rng), &jitter_rgb((90.0, 120.0, 70.0), rng));
            let coat = jitter_rgb((120.0, 80.0, 45.0), rng);
            let cx = 15.0 + dx;
            let cy = 17.0 + dy;
            canvas.disc(cx, cy, 6.0 * s, &coat);
            canvas.disc(cx + 7.0 * s, cy - 4.0 * s, 4.0 * s, &coat);
            canvas.triangle(
                (cx + 4.0 * s, cy - 7.0 * s),
                (cx + 6.0 * s, cy + 1.0),
                (cx + 2.0 * s, cy - 1.0),
                &jitter_rgb((90.0, 55.0, 30.0), rng),
            );
            canvas.rect((cx - 9.0 * s) as i64, (cy - 1.0) as i64, (cx - 6.0 * s) as i64, (cy - 6.0) as i64, &coat);
        }
        6 => {
            // Frog: wide bright-green blob with eye bumps.
            canvas.fill_gradient(&jitter_rgb((45.0, 75.0, 40.0), rng), &jitter_rgb((30.0, 55.0, 30.0), rng));
            let skin = jitter_rgb((90.0, 200.0, 70.0), rng);
            let cx = 16.0 + dx;
            let cy = 18.0 + dy;
            canvas.disc(cx, cy, 8.0 * s, &skin);
            canvas.rect((cx - 10.0 * s) as i64, (cy + 2.0) as i64, (cx + 10.0 * s) as i64, (cy + 6.0) as i64, &skin);
            canvas.disc(cx - 4.0 * s, cy - 7.0 * s, 2.4, &skin);
            canvas.disc(cx + 4.0 * s, cy - 7.0 * s, 2.4, &skin);
            let eye = Rgb(15.0, 15.0, 15.0);
            canvas.disc(cx - 4.0 * s, cy - 7.0 * s, 1.0, &eye);
            canvas.disc(cx + 4.0 * s, cy - 7.0 * s, 1.0, &eye);
        }
        7 => {
            // Horse: dark body, slanted neck, legs.
            canvas.fill_gradient(&jitter_rgb((145.0, 160.0, 110.0), rng), &jitter_rgb((110.0, 125.0, 85.0), rng));
            let coat = jitter_rgb((80.0, 50.0, 35.0), rng);
            let cx = 15.0 + dx;
            let cy = 15.0 + dy;
            canvas.rect((cx - 8.0 * s) as i64, (cy - 3.0) as i64, (cx + 7.0 * s) as i64, (cy + 3.0) as i64, &coat);
            canvas.triangle((cx + 5.0 * s, cy - 3.0), (cx + 11.0 * s, cy - 11.0 * s), (cx + 9.0 * s, cy - 1.0), &coat);
            canvas.disc(cx + 11.0 * s, cy - 11.0 * s, 2.2, &coat);
            for leg in 0..4 {
                let lx = cx - 7.0 * s + 4.2 * leg as f64 * s;
                canvas.rect(lx as i64, (cy + 3.0) as i64, (lx + 1.0) as i64, (cy + 12.0) as i64, &coat);
            }
        }
        8 => {
            // Ship: hull trapezoid and mast over a sea horizon.
            canvas.fill_gradient(&jitter_rgb((135.0, 180.0, 230.0), rng), &jitter_rgb((150.0, 195.0, 235.0), rng));
            let sea = jitter_rgb((30.0, 65.0, 135.0), rng);
            canvas.rect(0, (20.0 + dy) as i64, (CSIDE - 1) as i64, (CSIDE - 1) as i64, &sea);
            let hull = jitter_rgb((235.0, 235.0, 240.0), rng);
            let cx = 16.0 + dx;
            let cy = 19.0 + dy;
            canvas.triangle((cx - 10.0 * s, cy - 3.0), (cx + 10.0 * s, cy - 3.0), (cx + 6.0 * s, cy + 4.0), &hull);
            canvas.triangle((cx - 10.0 * s, cy - 3.0), (cx - 6.0 * s, cy + 4.0), (cx + 6.0 * s, cy + 4.0), &hull);
            canvas.rect((cx - 1.0) as i64, (cy - 12.0 * s) as i64, cx as i64, (cy - 3.0) as i64, &hull);
        }
        9 => {
            // Truck: long cargo box, cab, three wheels.
            canvas.fill_gradient(&jitter_rgb((140.0, 140.0, 140.0), rng), &jitter_rgb((90.0, 90.0, 90.0), rng));
            let cargo = jitter_rgb((205.0, 175.0, 60.0), rng);
            let cx = 16.0 + dx;
            let cy = 17.0 + dy;
            canvas.rect((cx - 11.0 * s) as i64, (cy - 8.0) as i64, (cx + 4.0 * s) as i64, (cy + 2.0) as i64, &cargo);
            canvas.rect((cx + 4.0 * s) as i64, (cy - 4.0) as i64, (cx + 11.0 * s) as i64, (cy + 2.0) as i64, &jitter_rgb((160.0, 60.0, 50.0), rng));
            let wheel = Rgb(18.0, 18.0, 20.0);
            canvas.disc(cx - 7.0 * s, cy + 4.0, 2.6, &wheel);
            canvas.disc(cx, cy + 4.0, 2.6, &wheel);
            canvas.disc(cx + 8.0 * s, cy + 4.0, 2.6, &wheel);
        }
        _ => unreachable!("label out of range"),
    }
    let noise = Normal::new(0.0, CIFAR_NOISE_SIGMA).unwrap();
    canvas.into_bytes(&noise, rng)
}

/// Writes the six CIFAR-10 batch files into `dir` unless present.
/// Returns `true` when files were generated.
pub fn ensure_synthetic_cifar(dir: &Path) -> Result<bool> {
    let root = {
        let sub = dir.join("cifar-10-batches-bin");
        if sub.is_dir() {
            sub
        } else {
            dir.to_path_buf()
        }
    };
    if all_present(&root, &CIFAR_FILE_NAMES) {
        return Ok(false);
    }
    create_dir(&root)?;
    let mut rng = stream_rng(SOURCE_SEED, CIFAR_STREAM);
    let train_counts = [5000usize; 10];
    let test_counts = [1000usize; 10];
    let train_labels = label_sequence(&train_counts, None, &mut rng);
    let test_labels = label_sequence(&test_counts, None, &mut rng);
    for (batch, chunk) in train_labels.chunks(10_000).enumerate() {
        let mut pixels = Vec::with_capacity(chunk.len() * CIFAR_IMAGE_LEN);
        for &label in chunk {
            pixels.extend(render_cifar(label, &mut rng));
        }
        write_cifar_batch(&root.join(CIFAR_FILE_NAMES[batch]), chunk, &pixels)?;
    }
    let mut pixels = Vec::with_capacity(test_labels.len() * CIFAR_IMAGE_LEN);
    for &label in &test_labels {
        pixels.extend(render_cifar(label, &mut rng));
    }
    write_cifar_batch(&root.join(CIFAR_FILE_NAMES[5]), &test_labels, &pixels)?;
    Ok(true)
}
