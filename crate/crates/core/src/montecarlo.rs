//! Exact checks of the Monte Carlo moment facts on finitely supported laws,
//! by enumerating all outcomes of `M` i.i.d. draws.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of outcomes `|support|^M` that will be enumerated.
pub const ENUMERATION_BUDGET: usize = 1_000_000;

/// Both sides of a checked (in)equality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

/// A law on finitely many reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteDistribution {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(Error::InvalidParameter("support and probabilities must be nonempty and of equal length".into()));
        }
        if support.iter().any(|x| !x.is_finite()) || probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidParameter("support must be finite and probabilities nonnegative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { support, probs })
    }

    pub fn bernoulli(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("Bernoulli parameter must lie in [0, 1], got {q}")));
        }
        Self::new(vec![0.0, 1.0], vec![1.0 - q, q])
    }

    pub fn point_mass(x: f64) -> Result<Self> {
        Self::new(vec![x], vec![1.0])
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().zip(&self.probs).map(|(x, p)| x * p).sum()
    }

    /// `E|X - EX|^p`.
    pub fn central_moment(&self, p: f64) -> f64 {
        let mu = self.mean();
        self.support.iter().zip(&self.probs).map(|(x, q)| q * (x - mu).abs().powf(p)).sum()
    }

    pub fn variance(&self) -> f64 {
        self.central_moment(2.0)
    }

    pub fn within_unit_interval(&self) -> bool {
        self.support.iter().all(|x| (0.0..=1.0).contains(x))
    }

    /// `E[g(X_1 + ... + X_M)]` by enumeration.
    pub fn expect_sum(&self, m: usize, g: impl Fn(f64) -> f64) -> Result<f64> {
        if m == 0 {
            return Err(Error::InvalidParameter("M must be at least 1".into()));
        }
        let n = self.support.len();
        let outcomes = (n as f64).powi(m as i32);
        if outcomes > ENUMERATION_BUDGET as f64 {
            return Err(Error::BudgetExceeded(format!("{n}^{m} outcomes exceed the enumeration budget {ENUMERATION_BUDGET}")));
        }
        let mut idx = vec![0usize; m];
        let mut total = 0.0;
        loop {
            let (mut s, mut p) = (0.0, 1.0);
            for &i in &idx {
                s += self.support[i];
                p *= self.probs[i];
            }
            total += p * g(s);
            let mut k = 0;
            loop {
                if k == m {
                    return Ok(total);
                }
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// `E[(Σ X_j - M EX)^2]` against `M E|X - EX|^2`; equal for every law.
    pub fn sum_variance_identity(&self, m: usize) -> Result<Sides> {
        let shift = m as f64 * self.mean();
        let lhs = self.expect_sum(m, |s| (s - shift) * (s - shift))?;
        Ok(Sides { lhs, rhs: m as f64 * self.variance() })
    }

    /// `(E|mean_M - EX|^p)^{1/p}` against `sqrt((p-1)/M) (E|X - EX|^p)^{1/p}`, for `p >= 2`.
    pub fn lp_mean_inequality(&self, m: usize, p: f64) -> Result<Sides> {
        if !(p >= 2.0) {
            return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
        }
        let (mu, mf) = (self.mean(), m as f64);
        let lhs = self.expect_sum(m, |s| (s / mf - mu).abs().powf(p))?.powf(1.0 / p);
        let rhs = ((p - 1.0) / mf).sqrt() * self.central_moment(p).powf(1.0 / p);
        Ok(Sides { lhs, rhs })
    }

    /// `E|Y - EY|^p` against `1/4`, for laws on `[0, 1]` and `p >= 2`.
    pub fn vartrivial_check(&self, p: f64) -> Result<Sides> {
        if !(p >= 2.0) {
            return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
        }
        if !self.within_unit_interval() {
            return Err(Error::InvalidParameter("support must lie in [0, 1]".into()));
        }
        Ok(Sides { lhs: self.central_moment(p), rhs: 0.25 })
    }
}

/// Two- and three-point laws used by the moment checks.
pub fn distribution_battery() -> Vec<FiniteDistribution> {
    let raw: [(&[f64], &[f64]); 8] = [
        (&[0.0, 1.0], &[0.5, 0.5]),
        (&[0.0, 1.0], &[0.2, 0.8]),
        (&[0.0, 1.0], &[0.9, 0.1]),
        (&[0.25, 0.75], &[0.3, 0.7]),
        (&[0.0, 0.5, 1.0], &[0.25, 0.5, 0.25]),
        (&[0.0, 0.1, 1.0], &[0.6, 0.3, 0.1]),
        (&[0.2, 0.4, 0.9], &[0.2, 0.2, 0.6]),
        (&[-1.0, 0.5, 3.0], &[0.5, 0.25, 0.25]),
    ];
    raw.iter()
        .map(|(s, p)| FiniteDistribution::new(s.to_vec(), p.to_vec()).expect("battery laws are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_half_three_draws() {
        let b = FiniteDistribution::bernoulli(0.5).unwrap();
        let s = b.sum_variance_identity(3).unwrap();
        assert_eq!(s.lhs, 0.75);
        assert_eq!(s.rhs, 0.75);
        let v = b.vartrivial_check(2.0).unwrap();
        assert_eq!((v.lhs, v.rhs), (0.25, 0.25));
    }

    #[test]
    fn point_mass_has_no_deviation() {
        let d = FiniteDistribution::point_mass(0.3).unwrap();
        assert_eq!(d.sum_variance_identity(4).unwrap(), Sides { lhs: 0.0, rhs: 0.0 });
        assert_eq!(d.lp_mean_inequality(3, 3.0).unwrap().lhs, 0.0);
    }

    #[test]
    fn single_draw_lp_is_sharp_for_p2() {
        // M = 1, p = 2: both sides equal the standard deviation
        let d = &distribution_battery()[4];
        let s = d.lp_mean_inequality(1, 2.0).unwrap();
        assert!((s.lhs - s.rhs).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FiniteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
        assert!(FiniteDistribution::bernoulli(1.5).is_err());
        let b = FiniteDistribution::bernoulli(0.5).unwrap();
        assert!(matches!(b.expect_sum(21, |s| s), Err(Error::BudgetExceeded(_))));
        assert!(b.lp_mean_inequality(2, 1.5).is_err());
        assert!(distribution_battery()[7].vartrivial_check(2.0).is_err());
    }
}
