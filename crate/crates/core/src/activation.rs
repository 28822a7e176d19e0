//! Norms, clipping bounds and componentwise activations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// p-norm of `x` for `p` in `[1, inf]`; `p = f64::INFINITY` gives the max-abs entry.
pub fn norm(x: &[f64], p: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::InvalidParameter("norm of an empty sequence".into()));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("p must lie in [1, inf], got {p}")));
    }
    Ok(if p == f64::INFINITY {
        max_abs(x)
    } else if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    })
}

/// Largest absolute entry, `0` for an empty slice.
pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Output clipping interval `[u, v]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBounds", into = "RawBounds")]
pub struct ClipBounds {
    u: f64,
    v: f64,
}

/// JSON form: `null` stands for an infinite end.
#[derive(Serialize, Deserialize)]
struct RawBounds {
    u: Option<f64>,
    v: Option<f64>,
}

impl TryFrom<RawBounds> for ClipBounds {
    type Error = Error;
    fn try_from(r: RawBounds) -> Result<Self> {
        ClipBounds::new(r.u.unwrap_or(f64::NEG_INFINITY), r.v.unwrap_or(f64::INFINITY))
    }
}

impl From<ClipBounds> for RawBounds {
    fn from(b: ClipBounds) -> Self {
        RawBounds {
            u: b.u.is_finite().then_some(b.u),
            v: b.v.is_finite().then_some(b.v),
        }
    }
}

impl ClipBounds {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if u.is_nan() || v.is_nan() || u >= v || u == f64::INFINITY || v == f64::NEG_INFINITY {
            return Err(Error::InvalidParameter(format!(
                "clip bounds need u < v, got ({u}, {v})"
            )));
        }
        Ok(Self { u, v })
    }

    /// `(-inf, inf)`: clipping is the identity.
    pub fn unbounded() -> Self {
        Self {
            u: f64::NEG_INFINITY,
            v: f64::INFINITY,
        }
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    #[inline]
    pub fn clip(&self, x: f64) -> f64 {
        x.min(self.v).max(self.u)
    }

    /// Derivative convention: 1 strictly inside `(u, v)`, 0 elsewhere.
    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        if x > self.u && x < self.v {
            1.0
        } else {
            0.0
        }
    }
}

/// Activation applied componentwise between layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activation {
    Rectifier,
    Clip(ClipBounds),
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply_scalar(&self, x: f64) -> f64 {
        match self {
            Activation::Rectifier => relu(x),
            Activation::Clip(b) => b.clip(x),
            Activation::Identity => x,
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| self.apply_scalar(v)).collect()
    }

    pub fn apply_in_place(&self, x: &mut [f64]) {
        for v in x {
            *v = self.apply_scalar(*v);
        }
    }
}

#[inline]
pub fn relu(x: f64) -> f64 {
    x.max(0.0)
}
