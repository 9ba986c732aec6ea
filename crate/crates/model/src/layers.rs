//! Dense and convolutional layers built on the tensor crate.

use agp_tensor::rng::glorot_uniform;
use agp_tensor::{Parameter, Tensor};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Pointwise activation choice for the attention-module layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Sigmoid,
    Tanh,
}

impl Activation {
    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "relu" => Some(Activation::Relu),
            "sigmoid" => Some(Activation::Sigmoid),
            "tanh" => Some(Activation::Tanh),
            _ => None,
        }
    }

    pub fn apply(self, x: &Tensor) -> Tensor {
        match self {
            Activation::Relu => x.relu(),
            Activation::Sigmoid => x.sigmoid(),
            Activation::Tanh => x.tanh(),
        }
    }
}

/// Fully connected layer `x ↦ x·Wᵀ + b` with `W: [out × in]`, `b: [out]`.
#[derive(Debug)]
pub struct DenseLayer {
    pub weight: Parameter,
    pub bias: Parameter,
}

impl DenseLayer {
    /// Fan-balanced uniform weights, zero biases.
    pub fn new(name: &str, in_dim: usize, out_dim: usize, rng: &mut ChaCha12Rng) -> Result<Self> {
        let weight = Parameter::new(
            format!("{name}.weight"),
            &[out_dim, in_dim],
            glorot_uniform(rng, out_dim * in_dim, in_dim, out_dim),
        )?;
        let bias = Parameter::new(format!("{name}.bias"), &[out_dim], vec![0.0; out_dim])?;
        Ok(Self { weight, bias })
    }

    /// `x: [n × in] → [n × out]`.
    pub fn apply(&self, x: &Tensor) -> Result<Tensor> {
        Ok(x.matmul(&self.weight.value().transpose()?)?
            .add_row(self.bias.value())?)
    }

    pub fn params(&self) -> Vec<&Parameter> {
        vec![&self.weight, &self.bias]
    }

    pub fn params_mut(&mut self) -> Vec<&mut Parameter> {
        vec![&mut self.weight, &mut self.bias]
    }
}

/// 3×3 valid convolution layer with per-channel bias.
#[derive(Debug)]
pub struct ConvLayer {
    pub weight: Parameter,
    pub bias: Parameter,
}

impl ConvLayer {
    pub fn new(name: &str, in_channels: usize, out_channels: usize, rng: &mut ChaCha12Rng) -> Result<Self> {
        let k = 3usize;
        let fan_in = in_channels * k * k;
        let fan_out = out_channels * k * k;
        let weight = Parameter::new(
            format!("{name}.weight"),
            &[out_channels, in_channels, k, k],
            glorot_uniform(rng, out_channels * in_channels * k * k, fan_in, fan_out),
        )?;
        let bias = Parameter::new(format!("{name}.bias"), &[out_channels], vec![0.0; out_channels])?;
        Ok(Self { weight, bias })
    }

    /// `x: [n × c × h × w] → [n × f × (h−2) × (w−2)]`.
    pub fn apply(&self, x: &Tensor) -> Result<Tensor> {
        Ok(x.conv2d(self.weight.value())?
            .add_chan_bias(self.bias.value())?)
    }

    pub fn params(&self) -> Vec<&Parameter> {
        vec![&self.weight, &self.bias]
    }

    pub fn params_mut(&mut self) -> Vec<&mut Parameter> {
        vec![&mut self.weight, &mut self.bias]
    }
}
