//! Explicit networks: the 1-norm net `𝕃_d`, the log-depth maximum net `𝕄_d`,
//! the maximum-convolution net and the 1-D interpolation net.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{affine_net, compose, compose_all, concat_net, identity_net, parallelize, sum_net};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::network::{Layer, StructuredNetwork};
use crate::numeric::ceil_snap;

/// `𝕃_1 = ((1; -1), 0), ((1, 1), 0)`: `x -> |x|`.
fn abs_net() -> StructuredNetwork {
    let l1 = Layer::linear(Matrix::from_vec(2, 1, vec![1.0, -1.0]).expect("static shape"));
    let l2 = Layer::linear(Matrix::from_vec(1, 2, vec![1.0, 1.0]).expect("static shape"));
    StructuredNetwork::new(vec![l1, l2]).expect("static shape")
}

/// `𝕃_d = 𝔖_{1,d} • P_d(𝕃_1, ..., 𝕃_1)`, architecture `(d, 2d, 1)`.
pub fn l1_norm_net(d: usize) -> Result<StructuredNetwork> {
    if d == 0 {
        return Err(Error::InvalidParameter("l1_norm_net needs d >= 1".into()));
    }
    let a = abs_net();
    let copies: Vec<&StructuredNetwork> = vec![&a; d];
    compose(&sum_net(1, d)?, &parallelize(&copies)?)
}

/// `𝕄_2`: `(x_1, x_2) -> r(x_1 - x_2) + r(x_2) - r(-x_2) = max{x_1, x_2}`.
fn max2_net() -> StructuredNetwork {
    let w1 = Matrix::from_rows(&[vec![1.0, -1.0], vec![0.0, 1.0], vec![0.0, -1.0]]).expect("static shape");
    let w2 = Matrix::from_rows(&[vec![1.0, 1.0, -1.0]]).expect("static shape");
    StructuredNetwork::new(vec![Layer::linear(w1), Layer::linear(w2)]).expect("static shape")
}

/// Memo table for `𝕄_d`; the recursion revisits `𝕄_{⌈d/2⌉}` at every level.
#[derive(Debug, Default)]
pub struct MaxNetCache {
    nets: HashMap<usize, StructuredNetwork>,
}

impl MaxNetCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `𝕄_d` for `d >= 2`:
    /// `𝕄_{2k} = 𝕄_k • P_k(𝕄_2, ..., 𝕄_2)` and
    /// `𝕄_{2k-1} = 𝕄_k • P_k(𝕄_2, ..., 𝕄_2, 𝕀_1)`.
    pub fn get(&mut self, d: usize) -> Result<StructuredNetwork> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!("max_net needs d >= 2, got {d}")));
        }
        if let Some(n) = self.nets.get(&d) {
            return Ok(n.clone());
        }
        let net = if d == 2 {
            max2_net()
        } else {
            let half = d.div_ceil(2);
            let outer = self.get(half)?;
            let m2 = self.get(2)?;
            let id = identity_net();
            let mut blocks: Vec<&StructuredNetwork> = vec![&m2; d / 2];
            if d % 2 == 1 {
                blocks.push(&id);
            }
            compose(&outer, &parallelize(&blocks)?)?
        };
        self.nets.insert(d, net.clone());
        Ok(net)
    }
}

/// `𝕄_d`: realizes `max{x_1, ..., x_d}` with `⌈log_2 d⌉` hidden layers.
pub fn max_net(d: usize) -> Result<StructuredNetwork> {
    MaxNetCache::new().get(d)
}

/// Inputs of the maximum-convolution net `F(x) = max_k (y_k - L ||x - x_k||_1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxConvSpec {
    pub lipschitz: f64,
    pub centers: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl MaxConvSpec {
    pub fn new(lipschitz: f64, centers: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        let s = Self {
            lipschitz,
            centers,
            values,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.centers.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "maximum convolution needs K >= 2 centers, got {}",
                self.centers.len()
            )));
        }
        if self.values.len() != self.centers.len() {
            return Err(Error::DimensionMismatch {
                expected: self.centers.len(),
                got: self.values.len(),
            });
        }
        let d = self.centers[0].len();
        if d == 0 {
            return Err(Error::InvalidParameter("centers must have positive dimension".into()));
        }
        if let Some(c) = self.centers.iter().find(|c| c.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: c.len(),
            });
        }
        if !(self.lipschitz >= 0.0) {
            return Err(Error::InvalidParameter("Lipschitz constant must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.centers[0].len()
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// `F(x)` evaluated directly.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.centers
            .iter()
            .zip(&self.values)
            .map(|(c, y)| y - self.lipschitz * c.iter().zip(x).map(|(a, b)| (a - b).abs()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max{1, L, max_k ||x_k||_inf, 2 ||y||_inf}`.
    pub fn weight_bound(&self) -> f64 {
        let centers = self
            .centers
            .iter()
            .map(|c| crate::activation::max_abs(c))
            .fold(0.0, f64::max);
        1f64.max(self.lipschitz)
            .max(centers)
            .max(2.0 * crate::activation::max_abs(&self.values))
    }
}

/// `Φ = 𝕄_K • 𝔸_{-L I_K, y} • P_K(𝕃_d • 𝔸_{I_d, -x_1}, ..., 𝕃_d • 𝔸_{I_d, -x_K}) • 𝔗_{K,d}`.
pub fn max_convolution_net(spec: &MaxConvSpec) -> Result<StructuredNetwork> {
    max_convolution_net_cached(spec, &mut MaxNetCache::new())
}

/// [`max_convolution_net`] reusing a caller-owned `𝕄_d` cache.
pub fn max_convolution_net_cached(spec: &MaxConvSpec, cache: &mut MaxNetCache) -> Result<StructuredNetwork> {
    spec.validate()?;
    let (k, d) = (spec.len(), spec.dim());
    let norm = l1_norm_net(d)?;
    let shifted = spec
        .centers
        .iter()
        .map(|c| {
            let shift = affine_net(Matrix::identity(d), c.iter().map(|v| -v).collect())?;
            compose(&norm, &shift)
        })
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&StructuredNetwork> = shifted.iter().collect();
    let distances = parallelize(&refs)?;
    let scale = affine_net(Matrix::scaled_identity(k, -spec.lipschitz), spec.values.clone())?;
    compose_all(&[&cache.get(k)?, &scale, &distances, &concat_net(k, d)?])
}

/// Node data for the 1-D interpolation net on `[a, b]` with `K = ⌈A⌉` cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interp1dSpec {
    pub a: f64,
    pub b: f64,
    pub resolution: f64,
    /// `f_k = f(r_k)` for `k = 0..=K`.
    pub values: Vec<f64>,
}

impl Interp1dSpec {
    /// Samples `f` at the nodes `r_k = a + k (b - a) / K`.
    pub fn sample(a: f64, b: f64, resolution: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let k = cells(resolution)?;
        let values = (0..=k).map(|i| f(node(a, b, k, i))).collect();
        let s = Self {
            a,
            b,
            resolution,
            values,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > self.a) {
            return Err(Error::InvalidParameter(format!(
                "interval needs a < b, got [{}, {}]",
                self.a, self.b
            )));
        }
        let k = cells(self.resolution)?;
        if self.values.len() != k + 1 {
            return Err(Error::DimensionMismatch {
                expected: k + 1,
                got: self.values.len(),
            });
        }
        Ok(())
    }

    /// `K = ⌈A⌉`.
    pub fn cells(&self) -> usize {
        cells(self.resolution).expect("validated")
    }

    pub fn node(&self, i: usize) -> f64 {
        node(self.a, self.b, self.cells(), i)
    }
}

fn cells(resolution: f64) -> Result<usize> {
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::InvalidParameter(format!("A must be positive, got {resolution}")));
    }
    Ok(ceil_snap(resolution) as usize)
}

fn node(a: f64, b: f64, k: usize, i: usize) -> f64 {
    a + i as f64 * (b - a) / k as f64
}

/// Piecewise-linear interpolant `x -> f_0 + sum_k c_k r(x - r_k)` as a
/// `(1, K+1, 1)` network, where `c_k` is the slope change at `r_k`.
pub fn interp1d_net(spec: &Interp1dSpec) -> Result<StructuredNetwork> {
    spec.validate()?;
    let k = spec.cells();
    let r = |i: usize| spec.node(i);
    let f = &spec.values;
    let coeff: Vec<f64> = (0..=k)
        .map(|i| {
            let right = (f[(i + 1).min(k)] - f[i]) / (r((i + 1).min(k)) - r(i.min(k - 1)));
            let left = (f[i] - f[i.saturating_sub(1)]) / (r(i.max(1)) - r(i.saturating_sub(1)));
            right - left
        })
        .collect();
    let w1 = Matrix::from_vec(k + 1, 1, vec![1.0; k + 1])?;
    let b1 = (0..=k).map(|i| -r(i)).collect();
    let w2 = Matrix::from_vec(1, k + 1, coeff)?;
    StructuredNetwork::new(vec![Layer::new(w1, b1)?, Layer::new(w2, vec![f[0]])?])
}
