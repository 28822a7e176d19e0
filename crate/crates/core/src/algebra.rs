//! Network calculus: composition, parallelization and the elementary affine networks.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::network::{Layer, StructuredNetwork};

/// `f • g`: the network realizing `f ∘ g`.
///
/// The last layer of `g` and the first layer of `f` are merged into the single
/// affine layer `(W_1 𝔚_𝔏, W_1 𝔅_𝔏 + B_1)`, so `depth = depth(f) + depth(g) - 1`.
pub fn compose(f: &StructuredNetwork, g: &StructuredNetwork) -> Result<StructuredNetwork> {
    if f.input_dim() != g.output_dim() {
        return Err(Error::InterfaceMismatch {
            input: f.input_dim(),
            output: g.output_dim(),
        });
    }
    let f_layers = f.layers();
    let g_layers = g.layers();
    let (f1, g_last) = (&f_layers[0], &g_layers[g_layers.len() - 1]);

    let w = f1.weights().mul(g_last.weights())?;
    let mut b = f1.weights().mul_vec(g_last.bias())?;
    for (bi, fb) in b.iter_mut().zip(f1.bias()) {
        *bi += fb;
    }
    let merged = Layer::new(w, b)?;

    let mut layers = Vec::with_capacity(f_layers.len() + g_layers.len() - 1);
    layers.extend_from_slice(&g_layers[..g_layers.len() - 1]);
    layers.push(merged);
    layers.extend_from_slice(&f_layers[1..]);
    StructuredNetwork::new(layers)
}

/// `f_1 • f_2 • ... • f_n`, evaluated right to left.
pub fn compose_all(nets: &[&StructuredNetwork]) -> Result<StructuredNetwork> {
    let (last, rest) = nets
        .split_last()
        .ok_or_else(|| Error::InvalidParameter("nothing to compose".into()))?;
    let mut acc = (*last).clone();
    for f in rest.iter().rev() {
        acc = compose(f, &acc)?;
    }
    Ok(acc)
}

/// `P_n(Φ_1, ..., Φ_n)`: block-diagonal weights and stacked biases.
pub fn parallelize(nets: &[&StructuredNetwork]) -> Result<StructuredNetwork> {
    let first = nets
        .first()
        .ok_or_else(|| Error::InvalidParameter("nothing to parallelize".into()))?;
    let depth = first.depth();
    for (index, n) in nets.iter().enumerate() {
        if n.depth() != depth {
            return Err(Error::DepthMismatch {
                index,
                depth: n.depth(),
                expected: depth,
            });
        }
    }
    let layers = (0..depth)
        .map(|k| {
            let blocks: Vec<&Matrix> = nets.iter().map(|n| n.layers()[k].weights()).collect();
            let bias = nets.iter().flat_map(|n| n.layers()[k].bias().iter().copied()).collect();
            Layer::new(Matrix::block_diag(&blocks), bias)
        })
        .collect::<Result<Vec<_>>>()?;
    StructuredNetwork::new(layers)
}

/// `𝔸_{W,B}`: the one-layer network `(W, B)`.
pub fn affine_net(w: Matrix, b: Vec<f64>) -> Result<StructuredNetwork> {
    Ok(StructuredNetwork::single(Layer::new(w, b)?))
}

/// `𝔖_{m,n}`: sums `n` vectors of `ℝ^m`; the matrix is `(I_m I_m ... I_m)`.
pub fn sum_net(m: usize, n: usize) -> Result<StructuredNetwork> {
    check_positive(m, n)?;
    let mut w = Matrix::zeros(m, m * n);
    for k in 0..n {
        for i in 0..m {
            w.set(i, k * m + i, 1.0);
        }
    }
    affine_net(w, vec![0.0; m])
}

/// `𝔗_{m,n}`: copies `x ∈ ℝ^n` into `(x, ..., x) ∈ ℝ^{mn}` (`m` copies).
pub fn concat_net(m: usize, n: usize) -> Result<StructuredNetwork> {
    check_positive(m, n)?;
    let mut w = Matrix::zeros(m * n, n);
    for k in 0..m {
        for i in 0..n {
            w.set(k * n + i, i, 1.0);
        }
    }
    affine_net(w, vec![0.0; m * n])
}

/// `𝕀_1`: `x -> r(x) - r(-x)`, architecture `(1, 2, 1)`.
pub fn identity_net() -> StructuredNetwork {
    let l1 = Layer::linear(Matrix::from_vec(2, 1, vec![1.0, -1.0]).expect("static shape"));
    let l2 = Layer::linear(Matrix::from_vec(1, 2, vec![1.0, -1.0]).expect("static shape"));
    StructuredNetwork::new(vec![l1, l2]).expect("static shape")
}

fn check_positive(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "dimensions must be positive, got m={m}, n={n}"
        )));
    }
    Ok(())
}
