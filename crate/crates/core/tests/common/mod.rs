//! Random networks shared by the integration suites.
#![allow(dead_code)]

use rand::Rng as _;
use reluapprox::rng::Rng;
use reluapprox::{Layer, Matrix, StructuredNetwork};

pub fn uniform_vec(rng: &mut Rng, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-r..=r)).collect()
}

/// Network with the given layer dimensions and entries drawn from `U[-r, r]`.
pub fn random_net(rng: &mut Rng, dims: &[usize], r: f64) -> StructuredNetwork {
    let layers = dims
        .windows(2)
        .map(|w| {
            let m = Matrix::from_vec(w[1], w[0], uniform_vec(rng, w[0] * w[1], r)).unwrap();
            Layer::new(m, uniform_vec(rng, w[1], r)).unwrap()
        })
        .collect();
    StructuredNetwork::new(layers).unwrap()
}

/// `depth + 1` dimensions in `1..=max_dim`.
pub fn random_dims(rng: &mut Rng, depth: usize, max_dim: usize) -> Vec<usize> {
    (0..=depth).map(|_| rng.random_range(1..=max_dim)).collect()
}
