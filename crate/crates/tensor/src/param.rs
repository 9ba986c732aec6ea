use crate::error::Result;
use crate::scalar::Scalar;
use crate::tensor::TensorBase;

/// A named trainable leaf tensor. The accumulated gradient lives with the
/// leaf; replacing the value (an optimizer step) installs a fresh leaf whose
/// gradient starts at zero.
#[derive(Debug)]
pub struct ParamBase<F: Scalar> {
    name: String,
    value: TensorBase<F>,
}

impl<F: Scalar> ParamBase<F> {
    pub fn new(name: impl Into<String>, shape: &[usize], data: Vec<F>) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            value: TensorBase::leaf_from_vec(shape, data)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self) -> &TensorBase<F> {
        &self.value
    }

    pub fn shape(&self) -> &[usize] {
        self.value.shape()
    }

    /// Accumulated gradient (zeros until a backward pass reaches this leaf).
    pub fn grad(&self) -> TensorBase<F> {
        self.value
            .leaf_grad()
            .expect("parameter value is always a leaf")
    }

    pub fn zero_grad(&self) {
        self.value.zero_leaf_grad();
    }

    /// Replaces the value with `data` under the same shape, resetting the
    /// gradient to zero.
    pub fn set_data(&mut self, data: Vec<F>) -> Result<()> {
        self.value = TensorBase::leaf_from_vec(&self.value.shape().to_vec(), data)?;
        Ok(())
    }
}
