//! Dense tensors with reverse-mode automatic differentiation.
//!
//! The op set is deliberately small: exactly what a convolutional feature
//! extractor, a sparse variational Gaussian-process attention layer, and a
//! softmax classifier need to train end-to-end. Graph recording is eager:
//! every op allocates its result and registers a backward closure; calling
//! [`TensorBase::backward`] on a scalar sweeps the graph once in reverse
//! topological order and accumulates leaf gradients additively.
//!
//! Everything is generic over the element type through [`Scalar`] (f32 or
//! f64); the training pipeline uses the f64 aliases [`Tensor`] and
//! [`Parameter`] exported at the crate root.

pub mod gradcheck;
pub mod rng;

mod error;
mod ops;
mod param;
mod scalar;
mod tape;
mod tensor;

pub use error::{Result, TensorError};
pub use ops::linalg::Side;
pub use param::ParamBase;
pub use scalar::Scalar;
pub use tensor::{no_grad, TensorBase};

/// Dense f64 tensor — the element type used by the whole training pipeline.
pub type Tensor = TensorBase<f64>;

/// Named trainable f64 leaf.
pub type Parameter = ParamBase<f64>;
