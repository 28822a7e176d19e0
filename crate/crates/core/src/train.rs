//! Empirical risk, its backpropagated gradient, SGD from `K` random
//! initializations, and the selection rule over `(restart, step)` pairs.
//!
//! Every random draw is keyed by a path under a master seed. Initializations use
//! `[INIT, k]`; the source serves the batch of restart `k`, step `n` from its own
//! stream `[BATCH, k, n]`, and the key `(0, 0)` is reserved for the validation set.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::activation::ClipBounds;
use crate::approx::HypercubeDomain;
use crate::arch::Architecture;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::params::{forward_batch, ParamVector};
use crate::rng::{self, derive_seed};
use crate::targets::TargetOracle;

pub const STREAM_INIT: u64 = 1;
pub const STREAM_BATCH: u64 = 2;
pub const STREAM_TEST: u64 = 4;

/// Pairs `(X_j, Y_j)`, inputs stored flat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSamples")]
pub struct SampleSet {
    d: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSamples {
    d: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl TryFrom<RawSamples> for SampleSet {
    type Error = Error;
    fn try_from(r: RawSamples) -> Result<Self> {
        SampleSet::new(r.d, r.xs, r.ys)
    }
}

impl SampleSet {
    pub fn new(d: usize, xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if ys.is_empty() {
            return Err(Error::EmptySamples);
        }
        if d == 0 || xs.len() != d * ys.len() {
            return Err(Error::DimensionMismatch {
                expected: d * ys.len(),
                got: xs.len(),
            });
        }
        Ok(Self { d, xs, ys })
    }

    pub fn from_pairs(pairs: &[(Vec<f64>, f64)]) -> Result<Self> {
        let d = pairs.first().ok_or(Error::EmptySamples)?.0.len();
        let mut xs = Vec::with_capacity(d * pairs.len());
        for (x, _) in pairs {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: x.len() });
            }
            xs.extend_from_slice(x);
        }
        Self::new(d, xs, pairs.iter().map(|p| p.1).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn x(&self, j: usize) -> &[f64] {
        &self.xs[j * self.d..(j + 1) * self.d]
    }

    pub fn y(&self, j: usize) -> f64 {
        self.ys[j]
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// Checks that every input lies in `dom` and every label in `[u, v]`.
    pub fn check_within(&self, dom: &HypercubeDomain, bounds: ClipBounds) -> Result<()> {
        if self.d != dom.d() {
            return Err(Error::DimensionMismatch { expected: dom.d(), got: self.d });
        }
        if let Some(j) = (0..self.len()).find(|&j| !dom.contains(self.x(j))) {
            return Err(Error::InvalidParameter(format!("sample {j} lies outside the domain")));
        }
        if let Some(j) = self.ys.iter().position(|&y| y < bounds.u() || y > bounds.v()) {
            return Err(Error::InvalidParameter(format!("label {j} lies outside [u, v]")));
        }
        Ok(())
    }
}

fn check_shapes(theta: &[f64], l: &Architecture, samples: &SampleSet) -> Result<()> {
    if l.output_dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: l.output_dim() });
    }
    if samples.dim() != l.input_dim() {
        return Err(Error::DimensionMismatch { expected: l.input_dim(), got: samples.dim() });
    }
    if theta.len() < l.param_count() {
        return Err(Error::InsufficientParameters { needed: l.param_count(), have: theta.len() });
    }
    Ok(())
}

/// `(1/M) Σ_j |N^{θ,l}_{u,v}(X_j) - Y_j|^2`.
pub fn empirical_risk(theta: &[f64], l: &Architecture, bounds: ClipBounds, samples: &SampleSet) -> Result<f64> {
    check_shapes(theta, l, samples)?;
    let out = forward_batch(theta, l, bounds, samples.xs())?;
    let sq: Vec<f64> = out.iter().zip(samples.ys()).map(|(o, y)| (o - y) * (o - y)).collect();
    Ok(pairwise_sum(&sq) / samples.len() as f64)
}

/// Gradient of [`empirical_risk`] in `θ`, with `relu'(0) = 0` and the clip
/// derivative `1` strictly inside `(u, v)`, `0` elsewhere. Entries past `P` get `0`.
pub fn risk_gradient(theta: &[f64], l: &Architecture, bounds: ClipBounds, samples: &SampleSet) -> Result<Vec<f64>> {
    check_shapes(theta, l, samples)?;
    let depth = l.depth();
    let offsets: Vec<usize> = (1..=depth).map(|i| l.layer_offset(i)).collect();
    let mut grad = vec![0.0; theta.len()];
    // acts[i] is the output of layer i (acts[0] = x); pre[i] its pre-activation.
    let mut acts: Vec<Vec<f64>> = (0..=depth).map(|i| vec![0.0; l.dim(i)]).collect();
    let mut pre: Vec<Vec<f64>> = (0..=depth).map(|i| vec![0.0; l.dim(i)]).collect();
    let mut delta = Vec::new();
    let mut back = Vec::new();
    let scale = 2.0 / samples.len() as f64;
    for j in 0..samples.len() {
        acts[0].copy_from_slice(samples.x(j));
        for i in 1..=depth {
            let (n, m, s) = (l.dim(i - 1), l.dim(i), offsets[i - 1]);
            let (prev, rest) = acts.split_at_mut(i);
            let input = &prev[i - 1];
            for r in 0..m {
                let z = crate::matrix::dot(&theta[s + r * n..s + (r + 1) * n], input) + theta[s + m * n + r];
                pre[i][r] = z;
                rest[0][r] = if i < depth { crate::activation::relu(z) } else { bounds.clip(z) };
            }
        }
        let out = acts[depth][0];
        delta.clear();
        delta.push(scale * (out - samples.y(j)) * bounds.derivative(pre[depth][0]));
        for i in (1..=depth).rev() {
            let (n, m, s) = (l.dim(i - 1), l.dim(i), offsets[i - 1]);
            if delta.iter().all(|&g| g == 0.0) {
                break;
            }
            for r in 0..m {
                let g = delta[r];
                if g == 0.0 {
                    continue;
                }
                let row = &mut grad[s + r * n..s + (r + 1) * n];
                for (w, a) in row.iter_mut().zip(&acts[i - 1]) {
                    *w += g * a;
                }
                grad[s + m * n + r] += g;
            }
            if i > 1 {
                back.clear();
                back.resize(n, 0.0);
                for r in 0..m {
                    let g = delta[r];
                    if g == 0.0 {
                        continue;
                    }
                    for (b, w) in back.iter_mut().zip(&theta[s + r * n..s + (r + 1) * n]) {
                        *b += g * w;
                    }
                }
                for (b, z) in back.iter_mut().zip(&pre[i - 1]) {
                    if *z <= 0.0 {
                        *b = 0.0;
                    }
                }
                std::mem::swap(&mut delta, &mut back);
            }
        }
    }
    Ok(grad)
}

/// A per-step quantity: one value for every step or an explicit list `γ_1, ..., γ_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Schedule<T> {
    Constant(T),
    List(Vec<T>),
}

impl<T: Copy> Schedule<T> {
    /// Value at step `n >= 1`.
    pub fn at(&self, n: usize) -> T {
        match self {
            Schedule::Constant(v) => *v,
            Schedule::List(vs) => vs[n - 1],
        }
    }

    fn covers(&self, steps: usize) -> bool {
        match self {
            Schedule::Constant(_) => true,
            Schedule::List(vs) => vs.len() >= steps,
        }
    }

    fn values(&self) -> &[T] {
        match self {
            Schedule::Constant(v) => std::slice::from_ref(v),
            Schedule::List(vs) => vs,
        }
    }
}

/// SGD with random restarts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub arch: Architecture,
    /// `K`.
    #[serde(alias = "K")]
    pub restarts: usize,
    /// `N`.
    #[serde(alias = "N")]
    pub steps: usize,
    /// Steps whose iterates are kept and eligible for selection; must contain 0.
    pub eligible_steps: Vec<usize>,
    pub learning_rates: Schedule<f64>,
    pub batch_sizes: Schedule<usize>,
    /// `c`: initializations are uniform on `[-c, c]^P`.
    #[serde(alias = "c")]
    pub init_radius: f64,
    /// `β`: only iterates with `||Θ||_∞ <= β` are eligible.
    #[serde(alias = "beta")]
    pub selection_radius: f64,
    pub clip: ClipBounds,
    pub seed: u64,
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.restarts == 0 {
            return bad("K must be at least 1".into());
        }
        if !self.eligible_steps.contains(&0) {
            return bad("the eligible step set must contain 0".into());
        }
        if let Some(n) = self.eligible_steps.iter().find(|&&n| n > self.steps) {
            return bad(format!("eligible step {n} exceeds N = {}", self.steps));
        }
        if !(self.init_radius >= 1.0 && self.init_radius.is_finite()) {
            return bad(format!("c must be finite and at least 1, got {}", self.init_radius));
        }
        if !(self.selection_radius >= self.init_radius) {
            return bad(format!("β = {} is below c = {}", self.selection_radius, self.init_radius));
        }
        if !self.learning_rates.covers(self.steps) || !self.batch_sizes.covers(self.steps) {
            return bad(format!("schedules must list at least N = {} values", self.steps));
        }
        if self.learning_rates.values().iter().any(|g| !g.is_finite()) {
            return bad("learning rates must be finite".into());
        }
        if self.batch_sizes.values().contains(&0) {
            return bad("batch sizes must be positive".into());
        }
        if self.arch.output_dim() != 1 {
            return bad(format!("architecture {} must have scalar output", self.arch));
        }
        Ok(())
    }

    /// `𝔑` sorted and deduplicated.
    pub fn eligible(&self) -> Vec<usize> {
        let mut e = self.eligible_steps.clone();
        e.sort_unstable();
        e.dedup();
        e
    }
}

/// Identifies the batch of restart `k` at step `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchKey {
    pub k: usize,
    pub n: usize,
}

impl BatchKey {
    pub const VALIDATION: BatchKey = BatchKey { k: 0, n: 0 };
}

/// Supplier of training batches.
pub trait SampleSource {
    fn dim(&self) -> usize;
    fn batch(&mut self, key: BatchKey, size: usize) -> Result<SampleSet>;
}

/// `X ~ U[a,b]^d`, `Y = f(X) + ξ` where `ξ` is uniform on `[-w, w]`,
/// `w = min{h, f(X) - u, v - f(X)}`, so `E[Y | X] = f(X)` and `Y ∈ [u, v]`.
pub struct SyntheticSource<T> {
    target: T,
    dom: HypercubeDomain,
    clip: ClipBounds,
    noise: f64,
    seed: u64,
}

impl<T: TargetOracle> SyntheticSource<T> {
    pub fn new(target: T, dom: HypercubeDomain, clip: ClipBounds, noise: f64, seed: u64) -> Result<Self> {
        let (lo, hi) = target.range();
        if lo < clip.u() || hi > clip.v() {
            return Err(Error::Hypothesis(format!(
                "target range [{lo}, {hi}] is not inside [{}, {}]",
                clip.u(),
                clip.v()
            )));
        }
        if !(noise >= 0.0 && noise.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise half-width must be finite and nonnegative, got {noise}")));
        }
        Ok(Self { target, dom, clip, noise, seed })
    }

    pub fn target(&self) -> &T {
        &self.target
    }

    /// Draws `size` samples from the stream `path`.
    pub fn draw(&self, path: &[u64], size: usize) -> Result<SampleSet> {
        let mut rng = rng::stream(self.seed, path);
        let d = self.dom.d();
        let mut xs = vec![0.0; d * size];
        let mut ys = Vec::with_capacity(size);
        for x in xs.chunks_mut(d) {
            self.dom.sample_into(&mut rng, x);
            let fx = self.target.eval(x);
            let w = self.noise.min(fx - self.clip.u()).min(self.clip.v() - fx).max(0.0);
            let xi = if w > 0.0 { rng.random_range(-w..=w) } else { 0.0 };
            ys.push(fx + xi);
        }
        SampleSet::new(d, xs, ys)
    }
}

impl<T: TargetOracle> SampleSource for SyntheticSource<T> {
    fn dim(&self) -> usize {
        self.dom.d()
    }

    fn batch(&mut self, key: BatchKey, size: usize) -> Result<SampleSet> {
        self.draw(&[STREAM_BATCH, key.k as u64, key.n as u64], size)
    }
}

/// Batches drawn from a fixed data set, with or without replacement.
pub struct FiniteSource {
    data: SampleSet,
    seed: u64,
    replace: bool,
    cursor: usize,
}

impl FiniteSource {
    /// Uniform sampling with replacement; never runs out.
    pub fn with_replacement(data: SampleSet, seed: u64) -> Self {
        Self { data, seed, replace: true, cursor: 0 }
    }

    /// Hands out consecutive disjoint slices in request order.
    pub fn sequential(data: SampleSet) -> Self {
        Self { data, seed: 0, replace: false, cursor: 0 }
    }
}

impl SampleSource for FiniteSource {
    fn dim(&self) -> usize {
        self.data.dim()
    }

    fn batch(&mut self, key: BatchKey, size: usize) -> Result<SampleSet> {
        let m = self.data.len();
        let idx: Vec<usize> = if self.replace {
            let mut rng = rng::stream(self.seed, &[STREAM_BATCH, key.k as u64, key.n as u64]);
            (0..size).map(|_| rng.random_range(0..m)).collect()
        } else {
            if self.cursor + size > m {
                return Err(Error::SourceExhausted(format!(
                    "requested {size} samples with {} of {m} left",
                    m - self.cursor
                )));
            }
            self.cursor += size;
            (self.cursor - size..self.cursor).collect()
        };
        let mut xs = Vec::with_capacity(size * self.data.dim());
        for &j in &idx {
            xs.extend_from_slice(self.data.x(j));
        }
        SampleSet::new(self.data.dim(), xs, idx.iter().map(|&j| self.data.y(j)).collect())
    }
}

/// Iterate kept for one eligible step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub n: usize,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Restart {
    /// 1-based restart index.
    pub k: usize,
    pub init_seed: u64,
    pub snapshots: Vec<Snapshot>,
}

/// `Θ_{k,n}` for `k = 1..K` and `n ∈ 𝔑`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartTable {
    pub arch: Architecture,
    pub restarts: Vec<Restart>,
}

impl RestartTable {
    pub fn get(&self, k: usize, n: usize) -> Option<&[f64]> {
        let r = self.restarts.get(k.checked_sub(1)?)?;
        r.snapshots.iter().find(|s| s.n == n).map(|s| s.theta.as_slice())
    }
}

/// Uniform draw from `[-c, c]^P` for restart `k`.
pub fn initial_parameters(arch: &Architecture, c: f64, master: u64, k: usize) -> (u64, Vec<f64>) {
    let seed = derive_seed(master, &[STREAM_INIT, k as u64]);
    let mut rng = rng::rng_from(seed);
    (seed, (0..arch.param_count()).map(|_| rng.random_range(-c..=c)).collect())
}

/// Runs `K` independent SGD trajectories `Θ_{k,n} = Θ_{k,n-1} - γ_n G(Θ_{k,n-1})`.
pub fn sgd_restarts(config: &TrainConfig, source: &mut dyn SampleSource) -> Result<RestartTable> {
    config.validate()?;
    if source.dim() != config.arch.input_dim() {
        return Err(Error::DimensionMismatch { expected: config.arch.input_dim(), got: source.dim() });
    }
    let eligible = config.eligible();
    let mut restarts = Vec::with_capacity(config.restarts);
    for k in 1..=config.restarts {
        let (init_seed, mut theta) = initial_parameters(&config.arch, config.init_radius, config.seed, k);
        let mut snapshots = vec![Snapshot { n: 0, theta: theta.clone() }];
        for n in 1..=config.steps {
            let batch = source.batch(BatchKey { k, n }, config.batch_sizes.at(n))?;
            let g = risk_gradient(&theta, &config.arch, config.clip, &batch)?;
            let rate = config.learning_rates.at(n);
            for (t, gi) in theta.iter_mut().zip(&g) {
                *t -= rate * gi;
            }
            if eligible.binary_search(&n).is_ok() {
                snapshots.push(Snapshot { n, theta: theta.clone() });
            }
        }
        restarts.push(Restart { k, init_seed, snapshots });
    }
    Ok(RestartTable { arch: config.arch.clone(), restarts })
}

/// The selected `(k, n)` and its validation risk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub k: usize,
    pub n: usize,
    pub risk: f64,
    pub eligible: usize,
    pub params: ParamVector,
}

/// Minimizes the empirical risk over all `(k, n)` with `||Θ_{k,n}||_∞ <= β`; the
/// lexicographically smallest `(k, n)` wins ties.
pub fn select_best(table: &RestartTable, config: &TrainConfig, validation: &SampleSet) -> Result<SelectionResult> {
    let mut best: Option<(usize, usize, f64, &[f64])> = None;
    let mut eligible = 0;
    for r in &table.restarts {
        for s in &r.snapshots {
            if crate::activation::max_abs(&s.theta) > config.selection_radius {
                continue;
            }
            eligible += 1;
            let risk = empirical_risk(&s.theta, &table.arch, config.clip, validation)?;
            if best.is_none_or(|b| risk < b.2) {
                best = Some((r.k, s.n, risk, &s.theta));
            }
        }
    }
    let (k, n, risk, theta) = best.ok_or_else(|| {
        Error::Hypothesis("no iterate satisfies the selection radius; β must be at least c".into())
    })?;
    Ok(SelectionResult {
        k,
        n,
        risk,
        eligible,
        params: ParamVector::new(table.arch.clone(), theta.to_vec())?,
    })
}

/// Monte Carlo estimate of `∫ |N(x) - f(x)|^q dx` under the uniform law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub q: u32,
    pub n_samples: usize,
    pub mean: f64,
    pub std_error: f64,
}

pub fn l2_error_estimate(
    theta: &ParamVector,
    bounds: ClipBounds,
    f: &dyn TargetOracle,
    dom: &HypercubeDomain,
    n_samples: usize,
    q: u32,
    seed: u64,
) -> Result<ErrorEstimate> {
    let [e] = error_estimates(theta, bounds, f, dom, n_samples, &[q], seed)?;
    Ok(e)
}

/// Estimates for several exponents from one shared set of points.
pub fn error_estimates<const Q: usize>(
    theta: &ParamVector,
    bounds: ClipBounds,
    f: &dyn TargetOracle,
    dom: &HypercubeDomain,
    n_samples: usize,
    qs: &[u32; Q],
    seed: u64,
) -> Result<[ErrorEstimate; Q]> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
    }
    if let Some(q) = qs.iter().find(|&&q| q != 1 && q != 2) {
        return Err(Error::InvalidParameter(format!("q must be 1 or 2, got {q}")));
    }
    let mut rng = rng::stream(seed, &[STREAM_TEST]);
    let mut xs = vec![0.0; n_samples * dom.d()];
    for x in xs.chunks_mut(dom.d()) {
        dom.sample_into(&mut rng, x);
    }
    let out = forward_batch(theta.theta(), theta.arch(), bounds, &xs)?;
    let abs: Vec<f64> = out.iter().zip(xs.chunks(dom.d())).map(|(o, x)| (o - f.eval(x)).abs()).collect();
    Ok(qs.map(|q| {
        let vals: Vec<f64> = abs.iter().map(|e| e.powi(q as i32)).collect();
        let (mean, std_error) = mean_and_se(&vals);
        ErrorEstimate { q, n_samples, mean, std_error }
    }))
}

/// Sample mean and its standard error (zero for a single value).
pub fn mean_and_se(vals: &[f64]) -> (f64, f64) {
    let m = vals.len() as f64;
    let mean = pairwise_sum(vals) / m;
    if vals.len() < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = vals.iter().map(|v| (v - mean) * (v - mean)).collect();
    (mean, (pairwise_sum(&dev) / (m - 1.0) / m).sqrt())
}
