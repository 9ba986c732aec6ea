use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point element type for tensors: `f32` or `f64`.
///
/// The training pipeline instantiates everything at `f64` (see the crate-root
/// aliases); the ops themselves are scalar-agnostic.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + 'static
{
    /// Lossy conversion from `f64` (infallible for f32/f64).
    fn of(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 conversion")
    }

    /// Widen to `f64`.
    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).expect("f64 conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
