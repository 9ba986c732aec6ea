//! Matrix product and transpose. The raw kernels are shared with the
//! convolution and linear-algebra backward passes.

use std::rc::Rc;

use crate::error::{Result, TensorError};
use crate::scalar::Scalar;
use crate::tensor::TensorBase;

/// c[m×n] = a[m×k] · b[k×n].
pub(crate) fn matmul_raw<F: Scalar>(a: &[F], b: &[F], m: usize, k: usize, n: usize) -> Vec<F> {
    let mut c = vec![F::zero(); m * n];
    for i in 0..m {
        let crow = &mut c[i * n..(i + 1) * n];
        for (p, &aip) in a[i * k..(i + 1) * k].iter().enumerate() {
            let brow = &b[p * n..(p + 1) * n];
            for (cv, &bv) in crow.iter_mut().zip(brow) {
                *cv += aip * bv;
            }
        }
    }
    c
}

/// c[m×k] = a[m×n] · b[k×n]ᵀ (b used transposed).
pub(crate) fn matmul_nt_raw<F: Scalar>(a: &[F], b: &[F], m: usize, n: usize, k: usize) -> Vec<F> {
    let mut c = vec![F::zero(); m * k];
    for i in 0..m {
        let arow = &a[i * n..(i + 1) * n];
        for p in 0..k {
            let brow = &b[p * n..(p + 1) * n];
            c[i * k + p] = arow.iter().zip(brow).map(|(&x, &y)| x * y).sum();
        }
    }
    c
}

/// c[k×n] = a[m×k]ᵀ · b[m×n] (a used transposed).
pub(crate) fn matmul_tn_raw<F: Scalar>(a: &[F], b: &[F], m: usize, k: usize, n: usize) -> Vec<F> {
    let mut c = vec![F::zero(); k * n];
    for i in 0..m {
        let brow = &b[i * n..(i + 1) * n];
        for (p, &aip) in a[i * k..(i + 1) * k].iter().enumerate() {
            let crow = &mut c[p * n..(p + 1) * n];
            for (cv, &bv) in crow.iter_mut().zip(brow) {
                *cv += aip * bv;
            }
        }
    }
    c
}

pub(crate) fn transpose_raw<F: Scalar>(src: &[F], rows: usize, cols: usize) -> Vec<F> {
    let mut out = vec![F::zero(); src.len()];
    for i in 0..rows {
        for j in 0..cols {
            out[j * rows + i] = src[i * cols + j];
        }
    }
    out
}

impl<F: Scalar> TensorBase<F> {
    /// 2-D matrix product; backward is dA = dC·Bᵀ, dB = Aᵀ·dC.
    pub fn matmul(&self, other: &TensorBase<F>) -> Result<TensorBase<F>> {
        let (m, k) = self.dims2("matmul")?;
        let (k2, n) = other.dims2("matmul")?;
        if k != k2 {
            return Err(TensorError::ShapeMismatch {
                op: "matmul",
                lhs: self.shape().to_vec(),
                rhs: other.shape().to_vec(),
            });
        }
        let out = matmul_raw(self.data(), other.data(), m, k, n);
        let ad = self.data_rc();
        let bd = other.data_rc();
        let (na, nb) = (self.is_tracked(), other.is_tracked());
        Ok(TensorBase::from_op(
            vec![m, n],
            Rc::new(out),
            vec![self.clone(), other.clone()],
            Box::new(move |g| {
                let da = na.then(|| matmul_nt_raw(g, &bd, m, n, k));
                let db = nb.then(|| matmul_tn_raw(&ad, g, m, k, n));
                vec![da, db]
            }),
        ))
    }

    /// 2-D transpose.
    pub fn transpose(&self) -> Result<TensorBase<F>> {
        let (n, m) = self.dims2("transpose")?;
        let out = transpose_raw(self.data(), n, m);
        let nx = self.is_tracked();
        Ok(TensorBase::from_op(
            vec![m, n],
            Rc::new(out),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| transpose_raw(g, m, n));
                vec![dx]
            }),
        ))
    }
}
