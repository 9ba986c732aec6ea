//! Central finite-difference helpers for verifying backward passes.

use crate::scalar::Scalar;
use crate::tensor::no_grad;

/// Central finite-difference gradient of `f` at `x0`, one coordinate at a
/// time: (f(x+h·eᵢ) − f(x−h·eᵢ)) / 2h.
pub fn numeric_grad<F: Scalar>(x0: &[F], step: f64, mut f: impl FnMut(&[F]) -> F) -> Vec<F> {
    let h = F::of(step);
    let two_h = F::of(2.0 * step);
    no_grad(|| {
        let mut x = x0.to_vec();
        (0..x0.len())
            .map(|i| {
                let orig = x[i];
                x[i] = orig + h;
                let up = f(&x);
                x[i] = orig - h;
                let down = f(&x);
                x[i] = orig;
                (up - down) / two_h
            })
            .collect()
    })
}

/// Largest elementwise relative error |a−b| / max(floor, |a|, |b|).
pub fn max_rel_err<F: Scalar>(got: &[F], want: &[F], floor: f64) -> f64 {
    assert_eq!(got.len(), want.len(), "gradient length mismatch");
    got.iter()
        .zip(want)
        .map(|(&a, &b)| {
            let denom = a.abs().max(b.abs()).as_f64().max(floor);
            (a - b).abs().as_f64() / denom
        })
        .fold(0.0, f64::max)
}
