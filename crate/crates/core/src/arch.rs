//! Layer-dimension sequences `(l_0, l_1, ..., l_L)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive layer dimensions `(l_0, ..., l_L)` with `L >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Architecture(Vec<usize>);

impl TryFrom<Vec<usize>> for Architecture {
    type Error = Error;
    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Architecture::new(dims)
    }
}

impl From<Architecture> for Vec<usize> {
    fn from(a: Architecture) -> Self {
        a.0
    }
}

impl Architecture {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "architecture needs at least two entries, got {dims:?}"
            )));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "architecture entries must be positive, got {dims:?}"
            )));
        }
        Ok(Self(dims))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    /// Number of affine layers `L`.
    pub fn depth(&self) -> usize {
        self.0.len() - 1
    }

    /// Number of hidden layers `L - 1`.
    pub fn hidden_layers(&self) -> usize {
        self.depth() - 1
    }

    pub fn input_dim(&self) -> usize {
        self.0[0]
    }

    pub fn output_dim(&self) -> usize {
        self.0[self.depth()]
    }

    /// `l_i` for `0 <= i <= L`.
    pub fn dim(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `sum_{i=1}^{L} l_i (l_{i-1} + 1)`.
    pub fn param_count(&self) -> usize {
        self.0.windows(2).map(|w| w[1] * (w[0] + 1)).sum()
    }

    /// Offset of layer `i` (1-based) inside a flattened parameter vector.
    pub fn layer_offset(&self, i: usize) -> usize {
        self.0[..i].windows(2).map(|w| w[1] * (w[0] + 1)).sum()
    }

    /// `max_i l_i`, the sup-norm of the dimension vector.
    pub fn max_width(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl std::fmt::Display for Architecture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let a = Architecture::new(vec![3, 6, 1]).unwrap();
        assert_eq!(a.depth(), 2);
        assert_eq!(a.hidden_layers(), 1);
        assert_eq!(a.param_count(), 6 * 4 + 7);
        assert_eq!(a.layer_offset(1), 0);
        assert_eq!(a.layer_offset(2), 24);
        assert_eq!(a.max_width(), 6);
        assert_eq!(a.to_string(), "(3,6,1)");
        assert_eq!(Architecture::new(vec![1, 1]).unwrap().param_count(), 2);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Architecture::new(vec![3]).is_err());
        assert!(Architecture::new(vec![3, 0, 1]).is_err());
        assert!(serde_json::from_str::<Architecture>("[2]").is_err());
    }
}
