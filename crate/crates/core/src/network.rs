//! Structured networks: explicit sequences of `(W_k, B_k)` layers.

use serde::{Deserialize, Serialize};

use crate::activation::Activation;
use crate::arch::Architecture;
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};

/// One affine layer `x -> W x + B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLayer")]
pub struct Layer {
    weights: Matrix,
    bias: Vec<f64>,
}

#[derive(Deserialize)]
struct RawLayer {
    weights: Matrix,
    bias: Vec<f64>,
}

impl TryFrom<RawLayer> for Layer {
    type Error = Error;
    fn try_from(r: RawLayer) -> Result<Self> {
        Layer::new(r.weights, r.bias)
    }
}

impl Layer {
    pub fn new(weights: Matrix, bias: Vec<f64>) -> Result<Self> {
        if bias.len() != weights.rows() {
            return Err(Error::DimensionMismatch {
                expected: weights.rows(),
                got: bias.len(),
            });
        }
        Ok(Self { weights, bias })
    }

    /// Layer with the given matrix and a zero bias.
    pub fn linear(weights: Matrix) -> Self {
        let bias = vec![0.0; weights.rows()];
        Self { weights, bias }
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn input_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.weights.rows()
    }

    /// `W x + B` written into `out`.
    pub(crate) fn apply_into(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            (0..self.output_dim()).map(|i| dot(self.weights.row(i), x) + self.bias[i]),
        );
    }
}

/// Nonempty chain of layers with matching interfaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNetwork")]
pub struct StructuredNetwork {
    layers: Vec<Layer>,
}

#[derive(Deserialize)]
struct RawNetwork {
    layers: Vec<Layer>,
}

impl TryFrom<RawNetwork> for StructuredNetwork {
    type Error = Error;
    fn try_from(r: RawNetwork) -> Result<Self> {
        StructuredNetwork::new(r.layers)
    }
}

impl StructuredNetwork {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidParameter("a network needs at least one layer".into()));
        }
        for w in layers.windows(2) {
            if w[1].input_dim() != w[0].output_dim() {
                return Err(Error::DimensionMismatch {
                    expected: w[0].output_dim(),
                    got: w[1].input_dim(),
                });
            }
        }
        Ok(Self { layers })
    }

    pub fn single(layer: Layer) -> Self {
        Self {
            layers: vec![layer],
        }
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<Layer> {
        self.layers
    }

    pub fn arch(&self) -> Architecture {
        let mut dims = Vec::with_capacity(self.layers.len() + 1);
        dims.push(self.layers[0].input_dim());
        dims.extend(self.layers.iter().map(Layer::output_dim));
        Architecture::new(dims).expect("layer dimensions are positive")
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn hidden_layers(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].output_dim()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.output_dim() * (l.input_dim() + 1)).sum()
    }

    /// `l_i`: input dimension for `i = 0`, output dimension of layer `i` otherwise.
    pub fn layer_dim(&self, i: usize) -> Option<usize> {
        match i {
            0 => Some(self.input_dim()),
            _ => self.layers.get(i - 1).map(Layer::output_dim),
        }
    }

    /// `W_i` for `1 <= i <= L`, `None` beyond the depth.
    pub fn weight(&self, i: usize) -> Option<&Matrix> {
        self.layer(i).map(Layer::weights)
    }

    /// `B_i` for `1 <= i <= L`, `None` beyond the depth.
    pub fn bias(&self, i: usize) -> Option<&[f64]> {
        self.layer(i).map(Layer::bias)
    }

    /// Layer `i`, 1-based.
    pub fn layer(&self, i: usize) -> Option<&Layer> {
        i.checked_sub(1).and_then(|k| self.layers.get(k))
    }

    /// Realization: `act` after every layer except the last, which stays affine.
    pub fn realize(&self, act: Activation, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        let mut cur = x.to_vec();
        let mut next = Vec::new();
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            layer.apply_into(&cur, &mut next);
            if k < last {
                act.apply_in_place(&mut next);
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(cur)
    }

    /// Realization with the rectifier on hidden layers.
    pub fn realize_relu(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.realize(Activation::Rectifier, x)
    }

    /// Largest absolute weight or bias.
    pub fn max_abs_param(&self) -> f64 {
        self.layers.iter().fold(0.0f64, |m, l| {
            m.max(crate::activation::max_abs(l.weights.data()))
                .max(crate::activation::max_abs(&l.bias))
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
