//! Embedding a network into a wider and deeper architecture without changing
//! its rectifier realization.
//!
//! Widths grow by zero padding: extra neurons get zero weights and biases, so
//! they output `r(0) = 0` and contribute nothing downstream. Depth grows by
//! composing `𝕀_1` onto a scalar output, one hidden layer of width 2 per step.

use crate::algebra::{compose, identity_net};
use crate::arch::Architecture;
use crate::error::{Error, Result};
use crate::network::{Layer, StructuredNetwork};

pub fn embed(net: &StructuredNetwork, target: &Architecture) -> Result<StructuredNetwork> {
    let src = net.arch();
    let (sl, tl) = (src.depth(), target.depth());
    let incompatible = |msg: String| Err(Error::IncompatibleArchitecture(msg));

    if target.input_dim() != src.input_dim() {
        return incompatible(format!(
            "input dimension {} differs from network input {}",
            target.input_dim(),
            src.input_dim()
        ));
    }
    if target.output_dim() != src.output_dim() {
        return incompatible(format!(
            "output dimension {} differs from network output {}",
            target.output_dim(),
            src.output_dim()
        ));
    }
    if tl < sl {
        return incompatible(format!("target depth {tl} is below network depth {sl}"));
    }
    if tl > sl && src.output_dim() != 1 {
        return incompatible("depth extension needs a scalar output".into());
    }
    for i in 1..sl {
        if target.dim(i) < src.dim(i) {
            return incompatible(format!(
                "layer {i} has width {} but the network needs {}",
                target.dim(i),
                src.dim(i)
            ));
        }
    }
    for i in sl..tl {
        if target.dim(i) < 2 {
            return incompatible(format!(
                "inserted layer {i} has width {} but an identity block needs 2",
                target.dim(i)
            ));
        }
    }

    let id = identity_net();
    let mut deep = net.clone();
    for _ in sl..tl {
        deep = compose(&id, &deep)?;
    }

    let layers = deep
        .layers()
        .iter()
        .enumerate()
        .map(|(k, layer)| {
            let (rows, cols) = (target.dim(k + 1), target.dim(k));
            let mut bias = layer.bias().to_vec();
            bias.resize(rows, 0.0);
            Layer::new(layer.weights().padded(rows, cols), bias)
        })
        .collect::<Result<Vec<_>>>()?;
    StructuredNetwork::new(layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn small() -> StructuredNetwork {
        let l1 = Layer::new(
            Matrix::from_vec(3, 1, vec![1.0, -2.0, 0.5]).unwrap(),
            vec![0.1, 0.3, -0.2],
        )
        .unwrap();
        let l2 = Layer::new(Matrix::from_vec(1, 3, vec![1.5, -1.0, 2.0]).unwrap(), vec![0.25]).unwrap();
        StructuredNetwork::new(vec![l1, l2]).unwrap()
    }

    fn arch(d: &[usize]) -> Architecture {
        Architecture::new(d.to_vec()).unwrap()
    }

    #[test]
    fn same_architecture_is_noop() {
        let n = small();
        assert_eq!(embed(&n, &n.arch()).unwrap(), n);
    }

    #[test]
    fn widen_and_deepen() {
        let n = small();
        for t in [arch(&[1, 5, 1]), arch(&[1, 3, 2, 1]), arch(&[1, 4, 7, 2, 1])] {
            let e = embed(&n, &t).unwrap();
            assert_eq!(e.arch(), t);
            for k in 0..100 {
                let x = [-3.0 + 0.06 * k as f64];
                let a = n.realize_relu(&x).unwrap()[0];
                let b = e.realize_relu(&x).unwrap()[0];
                assert!((a - b).abs() < 1e-12);
            }
            assert_eq!(e.max_abs_param(), n.max_abs_param());
        }
    }

    #[test]
    fn rejects_incompatible_targets() {
        let n = small();
        assert!(embed(&n, &arch(&[1, 2, 1])).is_err());
        assert!(embed(&n, &arch(&[2, 3, 1])).is_err());
        assert!(embed(&n, &arch(&[1, 3, 1, 1])).is_err());
        assert!(embed(&n, &arch(&[1, 1])).is_err());
        let wide_out = StructuredNetwork::single(Layer::linear(Matrix::zeros(2, 1)));
        assert!(embed(&wide_out, &arch(&[1, 4, 2])).is_err());
    }
}
