//! Sparse variational Gaussian process layer.
//!
//! The prior over inducing values is p(U) = N(0, K_ZZ); the variational
//! posterior is q(U) = N(μ_u, Σ_u) with Σ_u = L_u·L_uᵀ kept positive definite
//! by a softplus reparametrization of the diagonal. Marginalizing U gives the
//! Gaussian q(F) over function values at the inputs, computed here strictly
//! via one Cholesky factorization of K_ZZ and triangular solves — never an
//! explicit matrix inverse.

use agp_tensor::rng::{normal_vec, uniform_vec};
use agp_tensor::{Parameter, Side, Tensor, TensorError};
use rand_chacha::ChaCha12Rng;

use crate::error::{ModelError, Result};

/// RBF (squared-exponential) kernel hyperparameters, stored in log space so
/// positivity holds by construction.
#[derive(Debug)]
pub struct RbfKernelParams {
    pub log_lengthscale: Parameter,
    pub log_variance: Parameter,
}

impl RbfKernelParams {
    /// Unit lengthscale and unit variance.
    pub fn new(name: &str) -> Result<Self> {
        Ok(Self {
            log_lengthscale: Parameter::new(format!("{name}.log_lengthscale"), &[1], vec![0.0])?,
            log_variance: Parameter::new(format!("{name}.log_variance"), &[1], vec![0.0])?,
        })
    }

    pub fn lengthscale(&self) -> f64 {
        self.log_lengthscale.value().item().exp()
    }

    pub fn variance(&self) -> f64 {
        self.log_variance.value().item().exp()
    }

    pub fn params(&self) -> Vec<&Parameter> {
        vec![&self.log_lengthscale, &self.log_variance]
    }

    pub fn params_mut(&mut self) -> Vec<&mut Parameter> {
        vec![&mut self.log_lengthscale, &mut self.log_variance]
    }
}

/// All trainable state of the sparse GP: inducing locations `Z [M×D]`,
/// variational mean `μ_u [M]`, the raw matrix behind `L_u [M×M]`, and the
/// kernel hyperparameters.
#[derive(Debug)]
pub struct SvgpParams {
    pub z: Parameter,
    pub mu_u: Parameter,
    pub l_u_raw: Parameter,
    pub kernel: RbfKernelParams,
    pub jitter: f64,
}

impl SvgpParams {
    /// Z ~ U[0.3, 0.7) per coordinate, μ_u = 0, Σ_u = 0.05·I.
    pub fn new(name: &str, m: usize, d: usize, jitter: f64, rng: &mut ChaCha12Rng) -> Result<Self> {
        let z = Parameter::new(format!("{name}.z"), &[m, d], uniform_vec(rng, m * d, 0.3, 0.7))?;
        let mu_u = Parameter::new(format!("{name}.mu_u"), &[m], vec![0.0; m])?;
        // softplus(diag_raw) must equal √0.05 so that Σ_u starts at 0.05·I.
        let target = 0.05f64.sqrt();
        let diag_raw = (target.exp() - 1.0).ln();
        let mut raw = vec![0.0; m * m];
        for i in 0..m {
            raw[i * m + i] = diag_raw;
        }
        let l_u_raw = Parameter::new(format!("{name}.l_u_raw"), &[m, m], raw)?;
        Ok(Self {
            z,
            mu_u,
            l_u_raw,
            kernel: RbfKernelParams::new(name)?,
            jitter,
        })
    }

    pub fn inducing_count(&self) -> usize {
        self.z.shape()[0]
    }

    pub fn input_dim(&self) -> usize {
        self.z.shape()[1]
    }

    /// The effective lower-triangular factor of Σ_u: strict lower part of the
    /// raw matrix plus a softplus-positive diagonal.
    pub fn l_u(&self) -> Result<Tensor> {
        let raw = self.l_u_raw.value();
        let diag = raw.diag_part()?.softplus().diag_embed()?;
        Ok(raw.tril_strict()?.add(&diag)?)
    }

    pub fn params(&self) -> Vec<&Parameter> {
        let mut v = vec![&self.z, &self.mu_u, &self.l_u_raw];
        v.extend(self.kernel.params());
        v
    }

    pub fn params_mut(&mut self) -> Vec<&mut Parameter> {
        let mut v = vec![&mut self.z, &mut self.mu_u, &mut self.l_u_raw];
        v.extend(self.kernel.params_mut());
        v
    }
}

/// The Gaussian q(F) over function values at a batch of inputs, plus the
/// jitter to apply when factorizing `cov` for sampling.
#[derive(Debug)]
pub struct GaussianBatch {
    pub mean: Tensor,
    pub cov: Tensor,
    pub jitter: f64,
}

/// Cholesky of `a + jitter·I`, escalating the jitter once (to 1e-4) before
/// giving up.
pub fn chol_jittered(a: &Tensor, jitter: f64) -> Result<Tensor> {
    let n = a.shape()[0];
    let mut last: Option<(usize, f64)> = None;
    let mut ladder = vec![jitter];
    if jitter < 1e-4 {
        ladder.push(1e-4);
    }
    let top = *ladder.last().expect("ladder nonempty");
    for j in ladder {
        let eye = Tensor::eye(n).scale(j);
        match a.add(&eye)?.cholesky() {
            Ok(l) => return Ok(l),
            Err(TensorError::NotPositiveDefinite { index, value }) => last = Some((index, value)),
            Err(e) => return Err(e.into()),
        }
    }
    let (index, value) = last.expect("at least one attempt");
    Err(ModelError::JitterExhausted {
        jitter: top,
        index,
        value,
    })
}

/// RBF kernel matrix `K[i,j] = σ²·exp(−‖aᵢ−bⱼ‖²/(2ℓ²))` for `a: [n×D]`,
/// `b: [m×D]`, differentiable in `a`, `b`, and the hyperparameters.
pub fn kernel_matrix(a: &Tensor, b: &Tensor, theta: &RbfKernelParams) -> Result<Tensor> {
    let n = a.shape()[0];
    let m = b.shape()[0];
    let cross = a.matmul(&b.transpose()?)?;
    let ss_a = a.mul(a)?.row_sums()?.reshape(&[n])?;
    let ss_b = b.mul(b)?.row_sums()?.reshape(&[m])?;
    let d2 = cross.scale(-2.0).add_col(&ss_a)?.add_row(&ss_b)?;
    // −1/(2ℓ²) = −½·exp(−2·log ℓ), kept as a tensor so θ receives gradients.
    let neg_half_inv_sq = theta.log_lengthscale.value().scale(-2.0).exp().scale(-0.5);
    let variance = theta.log_variance.value().exp();
    Ok(d2.mul_scalar(&neg_half_inv_sq)?.exp().mul_scalar(&variance)?)
}

/// Marginal q(F) at inputs `x: [N×D]`:
/// mean = K_XZ·K_ZZ⁻¹·μ_u,
/// cov  = K_XX − K_XZ·K_ZZ⁻¹·(K_ZZ − Σ_u)·K_ZZ⁻¹·K_ZX,
/// both through the Cholesky factor of K_ZZ + jitter·I.
pub fn q_f(p: &SvgpParams, x: &Tensor) -> Result<GaussianBatch> {
    let m = p.inducing_count();
    let n = x.shape()[0];
    let k_zz = kernel_matrix(p.z.value(), p.z.value(), &p.kernel)?;
    let l = chol_jittered(&k_zz, p.jitter)?;
    let k_zx = kernel_matrix(p.z.value(), x, &p.kernel)?;
    let k_xx = kernel_matrix(x, x, &p.kernel)?;

    let alpha = l.tri_solve(&k_zx, Side::Lower)?; // L⁻¹·K_ZX   [M×N]
    let beta = l.tri_solve(&p.mu_u.value().reshape(&[m, 1])?, Side::Lower)?; // L⁻¹·μ_u [M×1]
    let mean = alpha.transpose()?.matmul(&beta)?.reshape(&[n])?;

    let gamma = l.tri_solve(&alpha, Side::Upper)?; // L⁻ᵀ·α = K_ZZ⁻¹·K_ZX  [M×N]
    let delta = p.l_u()?.transpose()?.matmul(&gamma)?; // L_uᵀ·γ           [M×N]
    let cov = k_xx
        .sub(&alpha.transpose()?.matmul(&alpha)?)?
        .add(&delta.transpose()?.matmul(&delta)?)?;
    // Exact symmetry, so downstream factorizations see a symmetric matrix.
    let cov = cov.add(&cov.transpose()?)?.scale(0.5);
    Ok(GaussianBatch {
        mean,
        cov,
        jitter: p.jitter,
    })
}

/// Closed-form KL(q(U) ‖ p(U)) between N(μ_u, Σ_u) and N(0, K_ZZ):
/// ½·[tr(K_ZZ⁻¹Σ_u) + μ_uᵀK_ZZ⁻¹μ_u − M + log|K_ZZ| − log|Σ_u|].
pub fn kl_u(p: &SvgpParams) -> Result<Tensor> {
    let m = p.inducing_count();
    let k_zz = kernel_matrix(p.z.value(), p.z.value(), &p.kernel)?;
    let l = chol_jittered(&k_zz, p.jitter)?;
    let l_u = p.l_u()?;

    let a = l.tri_solve(&l_u, Side::Lower)?; // L⁻¹·L_u, so ‖A‖²_F = tr(K⁻¹Σ_u)
    let trace_term = a.mul(&a)?.sum();
    let beta = l.tri_solve(&p.mu_u.value().reshape(&[m, 1])?, Side::Lower)?;
    let mahalanobis = beta.mul(&beta)?.sum();
    let log_det_k = l.diag_part()?.ln().sum().scale(2.0);
    let log_det_su = l_u.diag_part()?.ln().sum().scale(2.0);

    Ok(trace_term
        .add(&mahalanobis)?
        .add(&log_det_k)?
        .sub(&log_det_su)?
        .add_const(-(m as f64))
        .scale(0.5))
}

/// `s` reparametrized samples from q(F): row i = mean + L_f·εᵢ with
/// εᵢ ~ N(0, I) held constant, so gradients flow only through mean and L_f.
pub fn sample_f(q: &GaussianBatch, s: usize, rng: &mut ChaCha12Rng) -> Result<Tensor> {
    let n = q.mean.numel();
    let l_f = chol_jittered(&q.cov, q.jitter)?;
    let eps = Tensor::from_vec(&[s, n], normal_vec(rng, s * n, 0.0, 1.0))?;
    Ok(eps.matmul(&l_f.transpose()?)?.add_row(&q.mean)?)
}
