//! Cholesky factorization, triangular solves, and triangular/diagonal
//! helpers. These realize all inverse-free Gaussian-process algebra.

use std::rc::Rc;

use crate::error::{Result, TensorError};
use crate::ops::matmul::{matmul_nt_raw, matmul_tn_raw, transpose_raw};
use crate::scalar::Scalar;
use crate::tensor::TensorBase;

/// Which triangular system `tri_solve` solves, given lower-triangular
/// storage `l`: `Lower` solves L·x = b, `Upper` solves Lᵀ·x = b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

/// Forward substitution: solves L·x = b for all m columns of b.
/// Reads only the lower triangle of `l`.
pub(crate) fn solve_lower_raw<F: Scalar>(l: &[F], b: &[F], n: usize, m: usize) -> Vec<F> {
    let mut x = b.to_vec();
    for i in 0..n {
        let (head, tail) = x.split_at_mut(i * m);
        let rowi = &mut tail[..m];
        for k in 0..i {
            let lik = l[i * n + k];
            let rowk = &head[k * m..(k + 1) * m];
            for (xv, &kv) in rowi.iter_mut().zip(rowk) {
                *xv = *xv - lik * kv;
            }
        }
        let lii = l[i * n + i];
        for xv in rowi {
            *xv = *xv / lii;
        }
    }
    x
}

/// Back substitution: solves Lᵀ·x = b for all m columns of b.
/// Reads only the lower triangle of `l`.
pub(crate) fn solve_lower_t_raw<F: Scalar>(l: &[F], b: &[F], n: usize, m: usize) -> Vec<F> {
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        let (head, tail) = x.split_at_mut((i + 1) * m);
        let rowi = &mut head[i * m..];
        for k in i + 1..n {
            let lki = l[k * n + i];
            let rowk = &tail[(k - i - 1) * m..(k - i) * m];
            for (xv, &kv) in rowi.iter_mut().zip(rowk) {
                *xv = *xv - lki * kv;
            }
        }
        let lii = l[i * n + i];
        for xv in rowi {
            *xv = *xv / lii;
        }
    }
    x
}

fn check_diag_nonzero<F: Scalar>(l: &[F], n: usize) -> Result<()> {
    for i in 0..n {
        if l[i * n + i] == F::zero() {
            return Err(TensorError::SingularTriangular { index: i });
        }
    }
    Ok(())
}

fn square_dims<F: Scalar>(t: &TensorBase<F>, op: &'static str) -> Result<usize> {
    match t.shape() {
        [n, m] if n == m => Ok(*n),
        s => Err(TensorError::InvalidShape {
            op,
            expected: "square matrix",
            got: s.to_vec(),
        }),
    }
}

impl<F: Scalar> TensorBase<F> {
    /// Lower Cholesky factor L with L·Lᵀ = a. Reads only the lower triangle
    /// of `a`; fails with the offending pivot if `a` is not positive
    /// definite.
    ///
    /// The backward pass uses the level-triangular identity
    /// dA = fold(L⁻ᵀ Φ(Lᵀ dL) L⁻¹) where Φ keeps the lower triangle and
    /// halves the diagonal; since the forward pass reads only the lower
    /// triangle, the symmetric sensitivity is folded onto it.
    pub fn cholesky(&self) -> Result<TensorBase<F>> {
        let n = square_dims(self, "cholesky")?;
        let a = self.data();
        let mut l = vec![F::zero(); n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d = d - l[j * n + k] * l[j * n + k];
            }
            if d <= F::zero() {
                return Err(TensorError::NotPositiveDefinite {
                    index: j,
                    value: d.as_f64(),
                });
            }
            let ljj = d.sqrt();
            l[j * n + j] = ljj;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s = s - l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        let out_rc = Rc::new(l);
        let ld = Rc::clone(&out_rc);
        let nx = self.is_tracked();
        Ok(TensorBase::from_op(
            vec![n, n],
            out_rc,
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| {
                    // P = Φ(Lᵀ·dL)
                    let mut p = matmul_tn_raw(&ld, g, n, n, n);
                    for i in 0..n {
                        let half = F::of(0.5);
                        p[i * n + i] = p[i * n + i] * half;
                        for j in i + 1..n {
                            p[i * n + j] = F::zero();
                        }
                    }
                    // S = L⁻ᵀ·P·L⁻¹ via two transpose-solves.
                    let y = solve_lower_t_raw(&ld, &p, n, n);
                    let yt = transpose_raw(&y, n, n);
                    let st = solve_lower_t_raw(&ld, &yt, n, n);
                    // Fold the symmetric sensitivity onto the lower triangle.
                    let mut d = vec![F::zero(); n * n];
                    for i in 0..n {
                        d[i * n + i] = st[i * n + i];
                        for j in 0..i {
                            // S[i,j] + S[j,i] = Sᵀ[j,i] + Sᵀ[i,j]
                            d[i * n + j] = st[j * n + i] + st[i * n + j];
                        }
                    }
                    d
                });
                vec![dx]
            }),
        ))
    }

    /// Solves L·x = b (`Side::Lower`) or Lᵀ·x = b (`Side::Upper`) where `l`
    /// is lower-triangular storage with nonzero diagonal and b is n×m.
    pub fn tri_solve(&self, b: &TensorBase<F>, side: Side) -> Result<TensorBase<F>> {
        let n = square_dims(self, "tri_solve")?;
        let (bn, m) = b.dims2("tri_solve")?;
        if bn != n {
            return Err(TensorError::ShapeMismatch {
                op: "tri_solve",
                lhs: self.shape().to_vec(),
                rhs: b.shape().to_vec(),
            });
        }
        check_diag_nonzero(self.data(), n)?;
        let x = match side {
            Side::Lower => solve_lower_raw(self.data(), b.data(), n, m),
            Side::Upper => solve_lower_t_raw(self.data(), b.data(), n, m),
        };
        let out_rc = Rc::new(x);
        let xd = Rc::clone(&out_rc);
        let ld = self.data_rc();
        let (nl, nb) = (self.is_tracked(), b.is_tracked());
        Ok(TensorBase::from_op(
            vec![n, m],
            out_rc,
            vec![self.clone(), b.clone()],
            Box::new(move |g| {
                // For x = A⁻¹b: db = A⁻ᵀg and dA = −db·xᵀ, restricted to the
                // lower triangle actually read.
                let db = match side {
                    Side::Lower => solve_lower_t_raw(&ld, g, n, m),
                    Side::Upper => solve_lower_raw(&ld, g, n, m),
                };
                let dl = nl.then(|| {
                    let full = match side {
                        Side::Lower => matmul_nt_raw(&db, &xd, n, m, n),
                        Side::Upper => matmul_nt_raw(&xd, &db, n, m, n),
                    };
                    let mut d = vec![F::zero(); n * n];
                    for i in 0..n {
                        for j in 0..=i {
                            d[i * n + j] = -full[i * n + j];
                        }
                    }
                    d
                });
                vec![dl, nb.then(|| db)]
            }),
        ))
    }

    /// Keeps the strictly lower triangle, zeroing diagonal and above.
    pub fn tril_strict(&self) -> Result<TensorBase<F>> {
        let n = square_dims(self, "tril_strict")?;
        let mut out = vec![F::zero(); n * n];
        for i in 0..n {
            for j in 0..i {
                out[i * n + j] = self.data()[i * n + j];
            }
        }
        let nx = self.is_tracked();
        Ok(TensorBase::from_op(
            vec![n, n],
            Rc::new(out),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| {
                    let mut d = vec![F::zero(); n * n];
                    for i in 0..n {
                        for j in 0..i {
                            d[i * n + j] = g[i * n + j];
                        }
                    }
                    d
                });
                vec![dx]
            }),
        ))
    }

    /// Diagonal of a square matrix as a vector.
    pub fn diag_part(&self) -> Result<TensorBase<F>> {
        let n = square_dims(self, "diag_part")?;
        let out: Vec<F> = (0..n).map(|i| self.data()[i * n + i]).collect();
        let nx = self.is_tracked();
        Ok(TensorBase::from_op(
            vec![n],
            Rc::new(out),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| {
                    let mut d = vec![F::zero(); n * n];
                    for i in 0..n {
                        d[i * n + i] = g[i];
                    }
                    d
                });
                vec![dx]
            }),
        ))
    }

    /// Diagonal matrix from a vector.
    pub fn diag_embed(&self) -> Result<TensorBase<F>> {
        let n = match self.shape() {
            [n] => *n,
            s => {
                return Err(TensorError::InvalidShape {
                    op: "diag_embed",
                    expected: "1-D tensor",
                    got: s.to_vec(),
                })
            }
        };
        let mut out = vec![F::zero(); n * n];
        for i in 0..n {
            out[i * n + i] = self.data()[i];
        }
        let nx = self.is_tracked();
        Ok(TensorBase::from_op(
            vec![n, n],
            Rc::new(out),
            vec![self.clone()],
            Box::new(move |g| {
                let dx = nx.then(|| (0..n).map(|i| g[i * n + i]).collect());
                vec![dx]
            }),
        ))
    }
}
