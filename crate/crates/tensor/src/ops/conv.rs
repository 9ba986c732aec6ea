//! 2-D convolution (cross-correlation) and max pooling for the CNN backbones.

use std::rc::Rc;

use crate::error::{Result, TensorError};
use crate::scalar::Scalar;
use crate::tensor::TensorBase;

fn dims4<F: Scalar>(t: &TensorBase<F>, op: &'static str) -> Result<(usize, usize, usize, usize)> {
    match t.shape() {
        [a, b, c, d] => Ok((*a, *b, *c, *d)),
        s => Err(TensorError::InvalidShape {
            op,
            expected: "4-D tensor",
            got: s.to_vec(),
        }),
    }
}

/// out[n,f,:,:] = Σ_c x[n,c,:,:] ⋆ w[f,c,:,:] (valid cross-correlation).
fn conv_forward<F: Scalar>(
    x: &[F],
    w: &[F],
    (bn, c, h, wd): (usize, usize, usize, usize),
    (fc, kh, kw): (usize, usize, usize),
) -> Vec<F> {
    let (oh, ow) = (h - kh + 1, wd - kw + 1);
    let mut out = vec![F::zero(); bn * fc * oh * ow];
    for b in 0..bn {
        for f in 0..fc {
            let obase = (b * fc + f) * oh * ow;
            for ci in 0..c {
                let xbase = (b * c + ci) * h * wd;
                let wbase = (f * c + ci) * kh * kw;
                for ky in 0..kh {
                    for kx in 0..kw {
                        let wv = w[wbase + ky * kw + kx];
                        for oy in 0..oh {
                            let xrow = &x[xbase + (oy + ky) * wd + kx..][..ow];
                            let orow = &mut out[obase + oy * ow..][..ow];
                            for (o, &xv) in orow.iter_mut().zip(xrow) {
                                *o += wv * xv;
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

impl<F: Scalar> TensorBase<F> {
    /// Valid (no padding), stride-1 cross-correlation of an N×C×H×W input
    /// with F×C×kh×kw filters, yielding N×F×(H−kh+1)×(W−kw+1).
    pub fn conv2d(&self, filters: &TensorBase<F>) -> Result<TensorBase<F>> {
        let (bn, c, h, w) = dims4(self, "conv2d")?;
        let (fc, c2, kh, kw) = dims4(filters, "conv2d")?;
        if c != c2 || kh > h || kw > w {
            return Err(TensorError::ShapeMismatch {
                op: "conv2d",
                lhs: self.shape().to_vec(),
                rhs: filters.shape().to_vec(),
            });
        }
        let (oh, ow) = (h - kh + 1, w - kw + 1);
        let out = conv_forward(self.data(), filters.data(), (bn, c, h, w), (fc, kh, kw));
        let xd = self.data_rc();
        let wd_rc = filters.data_rc();
        let (nx, nw) = (self.is_tracked(), filters.is_tracked());
        Ok(TensorBase::from_op(
            vec![bn, fc, oh, ow],
            Rc::new(out),
            vec![self.clone(), filters.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| {
                    let mut d = vec![F::zero(); bn * c * h * w];
                    for b in 0..bn {
                        for f in 0..fc {
                            let gbase = (b * fc + f) * oh * ow;
                            for ci in 0..c {
                                let dbase = (b * c + ci) * h * w;
                                let wbase = (f * c + ci) * kh * kw;
                                for ky in 0..kh {
                                    for kx in 0..kw {
                                        let wv = wd_rc[wbase + ky * kw + kx];
                                        for oy in 0..oh {
                                            let grow = &g[gbase + oy * ow..][..ow];
                                            let drow =
                                                &mut d[dbase + (oy + ky) * w + kx..][..ow];
                                            for (dv, &gv) in drow.iter_mut().zip(grow) {
                                                *dv += wv * gv;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                    d
                });
                let dw = nw.then(|| {
                    let mut d = vec![F::zero(); fc * c * kh * kw];
                    for b in 0..bn {
                        for f in 0..fc {
                            let gbase = (b * fc + f) * oh * ow;
                            for ci in 0..c {
                                let xbase = (b * c + ci) * h * w;
                                let wbase = (f * c + ci) * kh * kw;
                                for ky in 0..kh {
                                    for kx in 0..kw {
                                        let mut acc = F::zero();
                                        for oy in 0..oh {
                                            let grow = &g[gbase + oy * ow..][..ow];
                                            let xrow = &xd[xbase + (oy + ky) * w + kx..][..ow];
                                            acc += grow
                                                .iter()
                                                .zip(xrow)
                                                .map(|(&a, &b)| a * b)
                                                .sum::<F>();
                                        }
                                        d[wbase + ky * kw + kx] += acc;
                                    }
                                }
                            }
                        }
                    }
                    d
                });
                vec![dx, dw]
            }),
        ))
    }

    /// 2×2 max pooling with stride 2. Output extents round up, so odd (or
    /// unit) inputs keep a final partial window instead of losing rows.
    pub fn max_pool2d(&self) -> Result<TensorBase<F>> {
        let (bn, c, h, w) = dims4(self, "max_pool2d")?;
        if h == 0 || w == 0 {
            return Err(TensorError::EmptyInput("max_pool2d"));
        }
        let (oh, ow) = (h.div_ceil(2), w.div_ceil(2));
        let mut out = vec![F::zero(); bn * c * oh * ow];
        let mut arg = vec![0usize; out.len()];
        for bc in 0..bn * c {
            let xbase = bc * h * w;
            let obase = bc * oh * ow;
            for oy in 0..oh {
                for ox in 0..ow {
                    let mut best = F::neg_infinity();
                    let mut best_i = 0;
                    for y in (2 * oy)..(2 * oy + 2).min(h) {
                        for x in (2 * ox)..(2 * ox + 2).min(w) {
                            let i = xbase + y * w + x;
                            let v = self.data()[i];
                            if v > best {
                                best = v;
                                best_i = i;
                            }
                        }
                    }
                    out[obase + oy * ow + ox] = best;
                    arg[obase + oy * ow + ox] = best_i;
                }
            }
        }
        let nx = self.is_tracked();
        let in_len = self.numel();
        Ok(TensorBase::from_op(
            vec![bn, c, oh, ow],
            Rc::new(out),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| {
                    let mut d = vec![F::zero(); in_len];
                    for (&gi, &i) in g.iter().zip(&arg) {
                        d[i] += gi;
                    }
                    d
                });
                vec![dx]
            }),
        ))
    }
}
