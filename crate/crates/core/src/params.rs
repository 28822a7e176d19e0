//! Vectorized networks: a flat parameter vector `theta` read through an architecture.
//!
//! Layout: the weights of layer 1 row-major, then its bias, then layer 2, and so on.
//! Entries past `param_count(l)` are carried but never read.

use serde::{Deserialize, Serialize};

use crate::activation::{relu, ClipBounds};
use crate::arch::Architecture;
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::network::{Layer, StructuredNetwork};

/// Points evaluated together in [`forward_batch`]; keeps a weight row hot in cache.
const BATCH: usize = 32;

/// Flat parameters `theta` bound to an architecture, with `theta.len() >= P(l)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ParamVector {
    arch: Architecture,
    theta: Vec<f64>,
}

#[derive(Deserialize)]
struct RawParams {
    arch: Architecture,
    theta: Vec<f64>,
}

impl TryFrom<RawParams> for ParamVector {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        ParamVector::new(r.arch, r.theta)
    }
}

impl ParamVector {
    pub fn new(arch: Architecture, theta: Vec<f64>) -> Result<Self> {
        let needed = arch.param_count();
        if theta.len() < needed {
            return Err(Error::InsufficientParameters {
                needed,
                have: theta.len(),
            });
        }
        Ok(Self { arch, theta })
    }

    pub fn zeros(arch: Architecture) -> Self {
        let theta = vec![0.0; arch.param_count()];
        Self { arch, theta }
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_mut(&mut self) -> &mut [f64] {
        &mut self.theta
    }

    pub fn into_theta(self) -> Vec<f64> {
        self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        crate::activation::max_abs(&self.theta)
    }

    /// `N^{theta,l}_{u,v}(x)` for a scalar-output architecture.
    pub fn eval(&self, bounds: ClipBounds, x: &[f64]) -> Result<f64> {
        realize_clipped(&self.theta, &self.arch, bounds, x)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `x -> W x + B` where the `m x n` matrix `W` is stored row-major at `theta[s..]`
/// and the `m` bias entries follow it.
pub fn affine_eval(theta: &[f64], s: usize, m: usize, n: usize, x: &[f64]) -> Result<Vec<f64>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("affine map dimensions must be positive".into()));
    }
    let needed = s + m * n + m;
    if theta.len() < needed {
        return Err(Error::InsufficientParameters {
            needed,
            have: theta.len(),
        });
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let bias = &theta[s + m * n..s + m * n + m];
    Ok((0..m)
        .map(|i| dot(&theta[s + i * n..s + (i + 1) * n], x) + bias[i])
        .collect())
}

fn check_len(theta: &[f64], l: &Architecture) -> Result<()> {
    let needed = l.param_count();
    if theta.len() < needed {
        return Err(Error::InsufficientParameters {
            needed,
            have: theta.len(),
        });
    }
    Ok(())
}

/// `N^{theta,l}_{u,v}(x)`: rectifier on hidden layers, clipping on the scalar output.
pub fn realize_clipped(theta: &[f64], l: &Architecture, bounds: ClipBounds, x: &[f64]) -> Result<f64> {
    if l.output_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: l.output_dim(),
        });
    }
    Ok(realize_clipped_vec(theta, l, bounds, x)?[0])
}

/// Vector-valued form of [`realize_clipped`]; the clip acts componentwise on the output.
pub fn realize_clipped_vec(
    theta: &[f64],
    l: &Architecture,
    bounds: ClipBounds,
    x: &[f64],
) -> Result<Vec<f64>> {
    forward_batch(theta, l, bounds, x)
}

/// Evaluates `N^{theta,l}_{u,v}` at every point of `xs` (concatenated inputs of
/// length `l_0` each) and returns the concatenated outputs.
pub fn forward_batch(theta: &[f64], l: &Architecture, bounds: ClipBounds, xs: &[f64]) -> Result<Vec<f64>> {
    check_len(theta, l)?;
    let d_in = l.input_dim();
    if !xs.len().is_multiple_of(d_in) || xs.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: d_in,
            got: xs.len(),
        });
    }
    let points = xs.len() / d_in;
    let d_out = l.output_dim();
    let mut out = Vec::with_capacity(points * d_out);
    let mut cur = Vec::new();
    let mut next = Vec::new();
    let depth = l.depth();
    for chunk in xs.chunks(BATCH * d_in) {
        let bs = chunk.len() / d_in;
        cur.clear();
        cur.extend_from_slice(chunk);
        let mut s = 0;
        for i in 1..=depth {
            let (n, m) = (l.dim(i - 1), l.dim(i));
            next.clear();
            next.resize(bs * m, 0.0);
            let bias = &theta[s + m * n..s + m * n + m];
            for r in 0..m {
                let w = &theta[s + r * n..s + (r + 1) * n];
                for p in 0..bs {
                    next[p * m + r] = dot(w, &cur[p * n..(p + 1) * n]) + bias[r];
                }
            }
            if i < depth {
                next.iter_mut().for_each(|v| *v = relu(*v));
            } else {
                next.iter_mut().for_each(|v| *v = bounds.clip(*v));
            }
            s += m * (n + 1);
            std::mem::swap(&mut cur, &mut next);
        }
        out.extend_from_slice(&cur);
    }
    Ok(out)
}

/// `T(net)`: concatenated row-major weights and biases, length exactly `P`.
pub fn flatten(net: &StructuredNetwork) -> ParamVector {
    let mut theta = Vec::with_capacity(net.param_count());
    for layer in net.layers() {
        theta.extend_from_slice(layer.weights().data());
        theta.extend_from_slice(layer.bias());
    }
    ParamVector {
        arch: net.arch(),
        theta,
    }
}

/// Inverse of [`flatten`]; surplus entries of `theta` are ignored.
pub fn unflatten(theta: &[f64], l: &Architecture) -> Result<StructuredNetwork> {
    check_len(theta, l)?;
    let mut layers = Vec::with_capacity(l.depth());
    let mut s = 0;
    for i in 1..=l.depth() {
        let (n, m) = (l.dim(i - 1), l.dim(i));
        let w = Matrix::from_vec(m, n, theta[s..s + m * n].to_vec())?;
        let b = theta[s + m * n..s + m * n + m].to_vec();
        layers.push(Layer::new(w, b)?);
        s += m * (n + 1);
    }
    StructuredNetwork::new(layers)
}
