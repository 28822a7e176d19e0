//! Target functions: the oracle interface and the built-in families.

use serde::{Deserialize, Serialize};

use crate::approx::HypercubeDomain;
use crate::error::{Error, Result};

/// A function `f: [a,b]^d -> ℝ` with a declared 1-norm Lipschitz constant and range.
pub trait TargetOracle {
    fn eval(&self, x: &[f64]) -> f64;
    /// `L` with `|f(x) - f(y)| <= L ||x - y||_1`.
    fn lipschitz(&self) -> f64;
    /// `(lo, hi)` containing every value of `f` on the domain.
    fn range(&self) -> (f64, f64);
}

/// Oracle backed by a closure.
pub struct FnTarget<F> {
    f: F,
    lipschitz: f64,
    range: (f64, f64),
}

impl<F: Fn(&[f64]) -> f64> FnTarget<F> {
    pub fn new(f: F, lipschitz: f64, range: (f64, f64)) -> Self {
        Self { f, lipschitz, range }
    }
}

impl<F: Fn(&[f64]) -> f64> TargetOracle for FnTarget<F> {
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
    fn range(&self) -> (f64, f64) {
        self.range
    }
}

fn one() -> f64 {
    1.0
}

fn three() -> f64 {
    3.0
}

fn half() -> f64 {
    0.5
}

/// Built-in target families with exact Lipschitz constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum TargetFamily {
    /// `scale * ||x - (center, ..., center)||_1`.
    AbsDist {
        #[serde(default = "half")]
        center: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// `||x||_1`.
    L1Norm,
    /// `offset + scale * sin(freq * (x_1 + ... + x_d)) / freq`.
    #[serde(alias = "ridge-sin")]
    SinRidge {
        #[serde(default = "three")]
        freq: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        offset: f64,
    },
    Constant { value: f64 },
}

impl TargetFamily {
    /// Parses a family name with default parameters.
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "abs-dist" => TargetFamily::AbsDist {
                center: 0.5,
                scale: 1.0,
            },
            "l1-norm" => TargetFamily::L1Norm,
            "sin-ridge" | "ridge-sin" => TargetFamily::SinRidge {
                freq: 3.0,
                scale: 1.0,
                offset: 0.0,
            },
            "constant" => TargetFamily::Constant { value: 0.5 },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown target family '{other}' (expected abs-dist, l1-norm, sin-ridge or constant)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            TargetFamily::AbsDist { .. } => "abs-dist",
            TargetFamily::L1Norm => "l1-norm",
            TargetFamily::SinRidge { .. } => "sin-ridge",
            TargetFamily::Constant { .. } => "constant",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        match *self {
            TargetFamily::AbsDist { center, scale } if !(center.is_finite() && scale >= 0.0 && scale.is_finite()) => {
                bad("abs-dist needs a finite center and a finite nonnegative scale")
            }
            TargetFamily::SinRidge { freq, scale, offset }
                if !(freq > 0.0 && freq.is_finite() && scale.is_finite() && offset.is_finite()) =>
            {
                bad("sin-ridge needs a positive frequency and finite scale/offset")
            }
            TargetFamily::Constant { value } if !value.is_finite() => bad("constant value must be finite"),
            _ => Ok(()),
        }
    }

    /// Binds the family to a domain, which fixes its range.
    pub fn on(&self, dom: HypercubeDomain) -> Result<FamilyTarget> {
        self.validate()?;
        Ok(FamilyTarget {
            family: self.clone(),
            dom,
        })
    }
}

/// A [`TargetFamily`] restricted to a hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyTarget {
    family: TargetFamily,
    dom: HypercubeDomain,
}

impl FamilyTarget {
    pub fn family(&self) -> &TargetFamily {
        &self.family
    }

    pub fn domain(&self) -> &HypercubeDomain {
        &self.dom
    }
}

impl TargetOracle for FamilyTarget {
    fn eval(&self, x: &[f64]) -> f64 {
        match self.family {
            TargetFamily::AbsDist { center, scale } => scale * x.iter().map(|v| (v - center).abs()).sum::<f64>(),
            TargetFamily::L1Norm => x.iter().map(|v| v.abs()).sum(),
            TargetFamily::SinRidge { freq, scale, offset } => offset + scale * (freq * x.iter().sum::<f64>()).sin() / freq,
            TargetFamily::Constant { value } => value,
        }
    }

    fn lipschitz(&self) -> f64 {
        match self.family {
            TargetFamily::AbsDist { scale, .. } => scale,
            TargetFamily::L1Norm => 1.0,
            TargetFamily::SinRidge { scale, .. } => scale.abs(),
            TargetFamily::Constant { .. } => 0.0,
        }
    }

    fn range(&self) -> (f64, f64) {
        let (a, b, d) = (self.dom.a(), self.dom.b(), self.dom.d() as f64);
        match self.family {
            TargetFamily::AbsDist { center, scale } => {
                let near = (a - center).max(center - b).max(0.0);
                let far = (a - center).abs().max((b - center).abs());
                (scale * d * near, scale * d * far)
            }
            TargetFamily::L1Norm => {
                let near = if a <= 0.0 && 0.0 <= b { 0.0 } else { a.abs().min(b.abs()) };
                (d * near, d * a.abs().max(b.abs()))
            }
            TargetFamily::SinRidge { freq, scale, offset } => {
                let amp = scale.abs() / freq;
                (offset - amp, offset + amp)
            }
            TargetFamily::Constant { value } => (value, value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(d: usize) -> HypercubeDomain {
        HypercubeDomain::new(0.0, 1.0, d).unwrap()
    }

    #[test]
    fn families_evaluate() {
        let t = TargetFamily::from_name("abs-dist").unwrap().on(unit(2)).unwrap();
        assert_eq!(t.eval(&[0.0, 1.0]), 1.0);
        assert_eq!(t.range(), (0.0, 1.0));
        let l1 = TargetFamily::L1Norm.on(unit(3)).unwrap();
        assert_eq!(l1.eval(&[1.0, -2.0, 3.0]), 6.0);
        assert_eq!(l1.range(), (0.0, 3.0));
        let s = TargetFamily::from_name("sin-ridge").unwrap().on(unit(1)).unwrap();
        assert!((s.eval(&[0.5]) - (1.5f64).sin() / 3.0).abs() < 1e-16);
        assert_eq!(s.lipschitz(), 1.0);
        assert!(TargetFamily::from_name("nope").is_err());
    }

    #[test]
    fn json_tags() {
        let f: TargetFamily = serde_json::from_str(r#"{"family":"abs-dist","scale":2.0}"#).unwrap();
        assert_eq!(f, TargetFamily::AbsDist { center: 0.5, scale: 2.0 });
        let g: TargetFamily = serde_json::from_str(r#"{"family":"ridge-sin"}"#).unwrap();
        assert_eq!(g.name(), "sin-ridge");
    }
}
