// Shared across test binaries; not every binary uses every helper.
#![allow(dead_code)]

use agp_tensor::gradcheck::{max_rel_err, numeric_grad};
use agp_tensor::rng::{stream_rng, uniform_vec};
use agp_tensor::Tensor;
use rand_chacha::ChaCha12Rng;

pub fn rng(seed: u64) -> ChaCha12Rng {
    stream_rng(seed, 0)
}

pub fn rand_tensor(rng: &mut ChaCha12Rng, shape: &[usize], lo: f64, hi: f64) -> Tensor {
    let n = shape.iter().product();
    Tensor::from_vec(shape, uniform_vec(rng, n, lo, hi)).unwrap()
}

/// A fixed, non-symmetric weighting so gradient checks exercise every output
/// coordinate independently (a plain sum can hide transposition bugs).
pub fn weighted_sum(t: &Tensor, seed: u64) -> Tensor {
    let mut r = stream_rng(seed, 99);
    let w = Tensor::from_vec(
        &t.shape().to_vec(),
        uniform_vec(&mut r, t.numel(), -1.0, 1.0),
    )
    .unwrap();
    t.mul(&w).unwrap().sum()
}

/// Checks autodiff against central finite differences for a scalar-valued
/// function of one input tensor.
pub fn assert_grad_close(
    shape: &[usize],
    data: Vec<f64>,
    f: impl Fn(&Tensor) -> Tensor,
    tol: f64,
    what: &str,
) {
    let leaf = Tensor::leaf_from_vec(shape, data.clone()).unwrap();
    let loss = f(&leaf);
    loss.backward().unwrap();
    let got = leaf.leaf_grad().unwrap();
    let want = numeric_grad(&data, 1e-5, |xs| {
        let t = Tensor::from_vec(shape, xs.to_vec()).unwrap();
        f(&t).item()
    });
    let err = max_rel_err(got.data(), &want, 1e-6);
    assert!(err < tol, "{what}: max rel err {err:.3e} ≥ {tol:.0e}");
}

pub fn assert_all_close(got: &[f64], want: &[f64], tol: f64, what: &str) {
    assert_eq!(got.len(), want.len(), "{what}: length mismatch");
    for (i, (&a, &b)) in got.iter().zip(want).enumerate() {
        assert!(
            (a - b).abs() <= tol,
            "{what}: element {i}: {a} vs {b} (|Δ|={:.3e} > {tol:.0e})",
            (a - b).abs()
        );
    }
}
