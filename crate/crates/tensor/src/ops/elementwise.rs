//! Pointwise ops, scalar broadcasts, and the simple vector broadcasts used by
//! fully connected and convolutional layers.

use std::rc::Rc;

use crate::error::{Result, TensorError};
use crate::scalar::Scalar;
use crate::tensor::TensorBase;

impl<F: Scalar> TensorBase<F> {
    /// Shared skeleton for same-shape binary ops. `dfa`/`dfb` map
    /// (upstream grad, a, b) to the per-element parent gradients.
    fn binary_map(
        &self,
        other: &TensorBase<F>,
        op: &'static str,
        fwd: fn(F, F) -> F,
        dfa: fn(F, F, F) -> F,
        dfb: fn(F, F, F) -> F,
    ) -> Result<TensorBase<F>> {
        if self.shape() != other.shape() {
            return Err(TensorError::ShapeMismatch {
                op,
                lhs: self.shape().to_vec(),
                rhs: other.shape().to_vec(),
            });
        }
        let out: Vec<F> = self
            .data()
            .iter()
            .zip(other.data())
            .map(|(&x, &y)| fwd(x, y))
            .collect();
        let ad = self.data_rc();
        let bd = other.data_rc();
        let (na, nb) = (self.is_tracked(), other.is_tracked());
        Ok(TensorBase::from_op(
            self.shape().to_vec(),
            Rc::new(out),
            vec![self.clone(), other.clone()],
            Box::new(move |g| {
                let da = na.then(|| {
                    g.iter()
                        .zip(ad.iter().zip(bd.iter()))
                        .map(|(&gi, (&x, &y))| dfa(gi, x, y))
                        .collect()
                });
                let db = nb.then(|| {
                    g.iter()
                        .zip(ad.iter().zip(bd.iter()))
                        .map(|(&gi, (&x, &y))| dfb(gi, x, y))
                        .collect()
                });
                vec![da, db]
            }),
        ))
    }

    /// Shared skeleton for unary ops. `df` maps (upstream grad, x, y=f(x))
    /// to the parent gradient; having `y` available avoids recomputation for
    /// exp/sigmoid/tanh.
    fn unary_map(
        &self,
        fwd: impl Fn(F) -> F,
        df: impl Fn(F, F, F) -> F + 'static,
    ) -> TensorBase<F> {
        let out: Vec<F> = self.data().iter().map(|&x| fwd(x)).collect();
        let out_rc = Rc::new(out);
        let xd = self.data_rc();
        let yd = Rc::clone(&out_rc);
        TensorBase::from_op(
            self.shape().to_vec(),
            out_rc,
            vec![self.clone()],
            Box::new(move |g| {
                let dx = g
                    .iter()
                    .zip(xd.iter().zip(yd.iter()))
                    .map(|(&gi, (&x, &y))| df(gi, x, y))
                    .collect();
                vec![Some(dx)]
            }),
        )
    }

    /// Elementwise sum.
    pub fn add(&self, other: &TensorBase<F>) -> Result<TensorBase<F>> {
        self.binary_map(other, "add", |x, y| x + y, |g, _, _| g, |g, _, _| g)
    }

    /// Elementwise difference.
    pub fn sub(&self, other: &TensorBase<F>) -> Result<TensorBase<F>> {
        self.binary_map(other, "sub", |x, y| x - y, |g, _, _| g, |g, _, _| -g)
    }

    /// Elementwise (Hadamard) product.
    pub fn mul(&self, other: &TensorBase<F>) -> Result<TensorBase<F>> {
        self.binary_map(
            other,
            "mul",
            |x, y| x * y,
            |g, _, y| g * y,
            |g, x, _| g * x,
        )
    }

    pub fn neg(&self) -> TensorBase<F> {
        self.unary_map(|x| -x, |g, _, _| -g)
    }

    pub fn relu(&self) -> TensorBase<F> {
        self.unary_map(
            |x| if x > F::zero() { x } else { F::zero() },
            |g, x, _| if x > F::zero() { g } else { F::zero() },
        )
    }

    pub fn sigmoid(&self) -> TensorBase<F> {
        self.unary_map(
            |x| F::one() / (F::one() + (-x).exp()),
            |g, _, y| g * y * (F::one() - y),
        )
    }

    pub fn tanh(&self) -> TensorBase<F> {
        self.unary_map(|x| x.tanh(), |g, _, y| g * (F::one() - y * y))
    }

    pub fn exp(&self) -> TensorBase<F> {
        self.unary_map(|x| x.exp(), |g, _, y| g * y)
    }

    /// Natural logarithm.
    pub fn ln(&self) -> TensorBase<F> {
        self.unary_map(|x| x.ln(), |g, x, _| g / x)
    }

    /// log(1 + eˣ), computed overflow-free.
    pub fn softplus(&self) -> TensorBase<F> {
        self.unary_map(
            |x| {
                if x > F::zero() {
                    x + (-x).exp().ln_1p()
                } else {
                    x.exp().ln_1p()
                }
            },
            |g, x, _| g / (F::one() + (-x).exp()),
        )
    }

    /// Multiplication by a compile-time constant.
    pub fn scale(&self, c: f64) -> TensorBase<F> {
        let c = F::of(c);
        self.unary_map(move |x| x * c, move |g, _, _| g * c)
    }

    /// Addition of a compile-time constant.
    pub fn add_const(&self, c: f64) -> TensorBase<F> {
        let c = F::of(c);
        self.unary_map(move |x| x + c, |g, _, _| g)
    }

    /// Broadcast-multiply by a single-element tensor (which may itself carry
    /// gradients, e.g. a kernel hyperparameter).
    pub fn mul_scalar(&self, s: &TensorBase<F>) -> Result<TensorBase<F>> {
        if s.numel() != 1 {
            return Err(TensorError::InvalidShape {
                op: "mul_scalar",
                expected: "single-element tensor",
                got: s.shape().to_vec(),
            });
        }
        let sv = s.data()[0];
        let out: Vec<F> = self.data().iter().map(|&x| x * sv).collect();
        let xd = self.data_rc();
        let (nx, ns) = (self.is_tracked(), s.is_tracked());
        Ok(TensorBase::from_op(
            self.shape().to_vec(),
            Rc::new(out),
            vec![self.clone(), s.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| g.iter().map(|&gi| gi * sv).collect());
                let ds = ns.then(|| {
                    vec![g.iter().zip(xd.iter()).map(|(&gi, &x)| gi * x).sum()]
                });
                vec![dx, ds]
            }),
        ))
    }

    /// Adds a length-m row vector to every row of an n×m matrix.
    pub fn add_row(&self, row: &TensorBase<F>) -> Result<TensorBase<F>> {
        let (_, m) = self.dims2("add_row")?;
        if row.numel() != m {
            return Err(TensorError::ShapeMismatch {
                op: "add_row",
                lhs: self.shape().to_vec(),
                rhs: row.shape().to_vec(),
            });
        }
        let rd = row.data_rc();
        let out: Vec<F> = self
            .data()
            .chunks(m)
            .flat_map(|r| r.iter().zip(rd.iter()).map(|(&x, &v)| x + v))
            .collect();
        let (nx, nr) = (self.is_tracked(), row.is_tracked());
        Ok(TensorBase::from_op(
            self.shape().to_vec(),
            Rc::new(out),
            vec![self.clone(), row.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| g.to_vec());
                let dr = nr.then(|| {
                    let mut d = vec![F::zero(); m];
                    for r in g.chunks(m) {
                        for (di, &gi) in d.iter_mut().zip(r) {
                            *di += gi;
                        }
                    }
                    d
                });
                vec![dx, dr]
            }),
        ))
    }

    /// Adds a length-n column vector to every column of an n×m matrix.
    pub fn add_col(&self, col: &TensorBase<F>) -> Result<TensorBase<F>> {
        let (n, m) = self.dims2("add_col")?;
        if col.numel() != n {
            return Err(TensorError::ShapeMismatch {
                op: "add_col",
                lhs: self.shape().to_vec(),
                rhs: col.shape().to_vec(),
            });
        }
        let cd = col.data_rc();
        let mut out = self.data().to_vec();
        for (i, r) in out.chunks_mut(m).enumerate() {
            let v = cd[i];
            for x in r {
                *x += v;
            }
        }
        let (nx, nc) = (self.is_tracked(), col.is_tracked());
        Ok(TensorBase::from_op(
            self.shape().to_vec(),
            Rc::new(out),
            vec![self.clone(), col.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| g.to_vec());
                let dc = nc.then(|| g.chunks(m).map(|r| r.iter().copied().sum()).collect());
                vec![dx, dc]
            }),
        ))
    }

    /// Adds a per-channel bias to an N×C×H×W activation.
    pub fn add_chan_bias(&self, bias: &TensorBase<F>) -> Result<TensorBase<F>> {
        let s = self.shape();
        if s.len() != 4 {
            return Err(TensorError::InvalidShape {
                op: "add_chan_bias",
                expected: "4-D activation",
                got: s.to_vec(),
            });
        }
        let (c, hw) = (s[1], s[2] * s[3]);
        if bias.numel() != c {
            return Err(TensorError::ShapeMismatch {
                op: "add_chan_bias",
                lhs: s.to_vec(),
                rhs: bias.shape().to_vec(),
            });
        }
        let bd = bias.data_rc();
        let mut out = self.data().to_vec();
        for img in out.chunks_mut(c * hw) {
            for (ci, plane) in img.chunks_mut(hw).enumerate() {
                let v = bd[ci];
                for x in plane {
                    *x += v;
                }
            }
        }
        let (nx, nb) = (self.is_tracked(), bias.is_tracked());
        Ok(TensorBase::from_op(
            s.to_vec(),
            Rc::new(out),
            vec![self.clone(), bias.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| g.to_vec());
                let db = nb.then(|| {
                    let mut d = vec![F::zero(); c];
                    for img in g.chunks(c * hw) {
                        for (ci, plane) in img.chunks(hw).enumerate() {
                            d[ci] += plane.iter().copied().sum();
                        }
                    }
                    d
                });
                vec![dx, db]
            }),
        ))
    }

    /// Rows/cols of a 2-D tensor, or a shape error naming `op`.
    pub(crate) fn dims2(&self, op: &'static str) -> Result<(usize, usize)> {
        match self.shape() {
            [n, m] => Ok((*n, *m)),
            s => Err(TensorError::InvalidShape {
                op,
                expected: "2-D tensor",
                got: s.to_vec(),
            }),
        }
    }
}
