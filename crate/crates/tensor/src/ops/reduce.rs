//! Reductions and softmax-family ops.

use std::rc::Rc;

use crate::error::{Result, TensorError};
use crate::scalar::Scalar;
use crate::tensor::TensorBase;

impl<F: Scalar> TensorBase<F> {
    /// Sum of all elements, as a single-element tensor.
    pub fn sum(&self) -> TensorBase<F> {
        let s: F = self.data().iter().copied().sum();
        let n = self.numel();
        let nx = self.is_tracked();
        TensorBase::from_op(
            vec![1],
            Rc::new(vec![s]),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| vec![g[0]; n]);
                vec![dx]
            }),
        )
    }

    /// Arithmetic mean of all elements, as a single-element tensor.
    pub fn mean(&self) -> Result<TensorBase<F>> {
        let n = self.numel();
        if n == 0 {
            return Err(TensorError::EmptyInput("mean"));
        }
        Ok(self.sum().scale(1.0 / n as f64))
    }

    /// Row sums of an n×m matrix, as an n×1 column.
    pub fn row_sums(&self) -> Result<TensorBase<F>> {
        let (n, m) = self.dims2("row_sums")?;
        let out: Vec<F> = self
            .data()
            .chunks(m)
            .map(|r| r.iter().copied().sum())
            .collect();
        let nx = self.is_tracked();
        Ok(TensorBase::from_op(
            vec![n, 1],
            Rc::new(out),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| {
                    let mut d = Vec::with_capacity(n * m);
                    for &gi in g {
                        d.extend(std::iter::repeat(gi).take(m));
                    }
                    d
                });
                vec![dx]
            }),
        ))
    }

    /// Row-wise softmax of an n×m matrix; subtracts the row max before
    /// exponentiation so large logits cannot overflow.
    pub fn softmax_rows(&self) -> Result<TensorBase<F>> {
        let (n, m) = self.dims2("softmax_rows")?;
        if m == 0 {
            return Err(TensorError::EmptyInput("softmax_rows"));
        }
        let mut out = vec![F::zero(); n * m];
        for (orow, xrow) in out.chunks_mut(m).zip(self.data().chunks(m)) {
            let mx = xrow.iter().copied().fold(F::neg_infinity(), F::max);
            let mut s = F::zero();
            for (o, &x) in orow.iter_mut().zip(xrow) {
                *o = (x - mx).exp();
                s += *o;
            }
            for o in orow.iter_mut() {
                *o = *o / s;
            }
        }
        let out_rc = Rc::new(out);
        let yd = Rc::clone(&out_rc);
        let nx = self.is_tracked();
        Ok(TensorBase::from_op(
            vec![n, m],
            out_rc,
            vec![self.clone()],
            Box::new(move |g| {
                // dx = y ⊙ (g − ⟨g, y⟩) per row.
                let dx = nx.then(|| {
                    let mut d = vec![F::zero(); n * m];
                    for ((drow, grow), yrow) in
                        d.chunks_mut(m).zip(g.chunks(m)).zip(yd.chunks(m))
                    {
                        let dot: F = grow.iter().zip(yrow).map(|(&a, &b)| a * b).sum();
                        for ((dv, &gv), &yv) in drow.iter_mut().zip(grow).zip(yrow) {
                            *dv = yv * (gv - dot);
                        }
                    }
                    d
                });
                vec![dx]
            }),
        ))
    }

    /// Row-wise log-softmax (numerically stable log of class probabilities).
    pub fn log_softmax_rows(&self) -> Result<TensorBase<F>> {
        let (n, m) = self.dims2("log_softmax_rows")?;
        if m == 0 {
            return Err(TensorError::EmptyInput("log_softmax_rows"));
        }
        let mut out = vec![F::zero(); n * m];
        for (orow, xrow) in out.chunks_mut(m).zip(self.data().chunks(m)) {
            let mx = xrow.iter().copied().fold(F::neg_infinity(), F::max);
            let lse: F = xrow.iter().map(|&x| (x - mx).exp()).sum::<F>().ln() + mx;
            for (o, &x) in orow.iter_mut().zip(xrow) {
                *o = x - lse;
            }
        }
        let out_rc = Rc::new(out);
        let yd = Rc::clone(&out_rc);
        let nx = self.is_tracked();
        Ok(TensorBase::from_op(
            vec![n, m],
            out_rc,
            vec![self.clone()],
            Box::new(move |g| {
                // dx = g − exp(y)·Σ_row g.
                let dx = nx.then(|| {
                    let mut d = vec![F::zero(); n * m];
                    for ((drow, grow), yrow) in
                        d.chunks_mut(m).zip(g.chunks(m)).zip(yd.chunks(m))
                    {
                        let gs: F = grow.iter().copied().sum();
                        for ((dv, &gv), &yv) in drow.iter_mut().zip(grow).zip(yrow) {
                            *dv = gv - yv.exp() * gs;
                        }
                    }
                    d
                });
                vec![dx]
            }),
        ))
    }

    /// Softmax of a 1-D vector.
    pub fn softmax(&self) -> Result<TensorBase<F>> {
        match self.shape() {
            [n] => {
                let n = *n;
                self.reshape(&[1, n])?.softmax_rows()?.reshape(&[n])
            }
            s => Err(TensorError::InvalidShape {
                op: "softmax",
                expected: "1-D tensor",
                got: s.to_vec(),
            }),
        }
    }
}
