//! Shape manipulation and row/column gathers.

use std::rc::Rc;

use crate::error::{Result, TensorError};
use crate::scalar::Scalar;
use crate::tensor::TensorBase;

impl<F: Scalar> TensorBase<F> {
    /// Reinterprets the data under a new shape with the same element count.
    /// Shares the underlying buffer; no copy.
    pub fn reshape(&self, new_shape: &[usize]) -> Result<TensorBase<F>> {
        let expected: usize = new_shape.iter().product();
        if expected != self.numel() {
            return Err(TensorError::DataLength {
                shape: new_shape.to_vec(),
                expected,
                got: self.numel(),
            });
        }
        let nx = self.is_tracked();
        Ok(TensorBase::from_op(
            new_shape.to_vec(),
            self.data_rc(),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| g.to_vec());
                vec![dx]
            }),
        ))
    }

    /// Selects rows of a 2-D tensor in the given order (repeats allowed).
    pub fn gather_rows(&self, idx: &[usize]) -> Result<TensorBase<F>> {
        let (n, m) = self.dims2("gather_rows")?;
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(TensorError::IndexOutOfBounds {
                op: "gather_rows",
                index: bad,
                extent: n,
            });
        }
        let mut out = Vec::with_capacity(idx.len() * m);
        for &i in idx {
            out.extend_from_slice(&self.data()[i * m..(i + 1) * m]);
        }
        let nx = self.is_tracked();
        let idx = idx.to_vec();
        let rows = idx.len();
        Ok(TensorBase::from_op(
            vec![rows, m],
            Rc::new(out),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| {
                    let mut d = vec![F::zero(); n * m];
                    for (r, &i) in idx.iter().enumerate() {
                        for (dv, &gv) in d[i * m..(i + 1) * m].iter_mut().zip(&g[r * m..(r + 1) * m])
                        {
                            *dv += gv;
                        }
                    }
                    d
                });
                vec![dx]
            }),
        ))
    }

    /// Selects columns of a 2-D tensor in the given order (repeats allowed).
    pub fn gather_cols(&self, idx: &[usize]) -> Result<TensorBase<F>> {
        let (n, m) = self.dims2("gather_cols")?;
        if let Some(&bad) = idx.iter().find(|&&j| j >= m) {
            return Err(TensorError::IndexOutOfBounds {
                op: "gather_cols",
                index: bad,
                extent: m,
            });
        }
        let cols = idx.len();
        let mut out = Vec::with_capacity(n * cols);
        for r in 0..n {
            let row = &self.data()[r * m..(r + 1) * m];
            out.extend(idx.iter().map(|&j| row[j]));
        }
        let nx = self.is_tracked();
        let idx = idx.to_vec();
        Ok(TensorBase::from_op(
            vec![n, cols],
            Rc::new(out),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| {
                    let mut d = vec![F::zero(); n * m];
                    for r in 0..n {
                        for (c, &j) in idx.iter().enumerate() {
                            d[r * m + j] += g[r * cols + c];
                        }
                    }
                    d
                });
                vec![dx]
            }),
        ))
    }

    /// One column of a 2-D tensor, as an n×1 tensor.
    pub fn col(&self, j: usize) -> Result<TensorBase<F>> {
        self.gather_cols(&[j])
    }
}
