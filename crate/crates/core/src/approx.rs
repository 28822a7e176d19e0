//! Approximation of Lipschitz targets by explicit networks: covering grids, the
//! multidimensional maximum-convolution approximator, the 1-D interpolation
//! approximator and the ε-architecture.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::activation::ClipBounds;
use crate::arch::Architecture;
use crate::constructive::{interp1d_net, max_convolution_net, Interp1dSpec, MaxConvSpec};
use crate::embed::embed;
use crate::error::{Error, Result};
use crate::numeric::{ceil_log2, ceil_snap, floor_snap};
use crate::params::{flatten, forward_batch, ParamVector};
use crate::rng::{self, Rng};
use crate::targets::{TargetFamily, TargetOracle};

/// Default cap on `d * points_per_axis^d` for [`sup_error_estimate`].
pub const DEFAULT_GRID_BUDGET: usize = 50_000_000;

/// Pairs drawn by the Lipschitz spot check.
pub const LIPSCHITZ_PAIRS: usize = 1000;

const REL_TOL: f64 = 1e-9;

/// `x >= y` up to a relative `1e-9`, for comparing integers against real thresholds.
fn at_least(x: f64, y: f64) -> bool {
    x >= y - REL_TOL * y.abs().max(1.0)
}

/// The cube `[a, b]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypercubeDomain {
    a: f64,
    b: f64,
    d: usize,
}

impl HypercubeDomain {
    pub fn new(a: f64, b: f64, d: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!("domain needs finite a < b, got [{a}, {b}]")));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("domain dimension must be positive".into()));
        }
        Ok(Self { a, b, d })
    }

    pub fn unit(d: usize) -> Result<Self> {
        Self::new(0.0, 1.0, d)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> Vec<f64> {
        vec![0.5 * (self.a + self.b); self.d]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.d && x.iter().all(|&v| self.a <= v && v <= self.b)
    }

    /// Uniform draw from the cube into `out`.
    pub fn sample_into(&self, rng: &mut Rng, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = rng.random_range(self.a..=self.b);
        }
    }
}

/// Calls `visit` with every point of the tensor grid whose axis coordinates are `axis`.
fn for_each_grid_point(axis: &[f64], d: usize, mut visit: impl FnMut(&[f64])) {
    let m = axis.len();
    let mut idx = vec![0usize; d];
    let mut x: Vec<f64> = vec![axis[0]; d];
    loop {
        visit(&x);
        let mut k = 0;
        loop {
            if k == d {
                return;
            }
            idx[k] += 1;
            if idx[k] < m {
                x[k] = axis[idx[k]];
                break;
            }
            idx[k] = 0;
            x[k] = axis[0];
            k += 1;
        }
    }
}

/// Cell midpoints of the uniform `m^d` subdivision of the cube.
pub fn midpoint_grid(dom: &HypercubeDomain, m: usize) -> Vec<Vec<f64>> {
    let h = dom.width() / m as f64;
    let axis: Vec<f64> = (0..m).map(|i| dom.a + (i as f64 + 0.5) * h).collect();
    let mut pts = Vec::with_capacity(m.pow(dom.d as u32));
    for_each_grid_point(&axis, dom.d, |x| pts.push(x.to_vec()));
    pts
}

/// Subdivisions per axis for a 1-norm covering radius `r`: `⌈d (b - a) / (2 r)⌉`.
pub fn covering_resolution(dom: &HypercubeDomain, r: f64) -> Result<usize> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("covering radius must be positive, got {r}")));
    }
    Ok((ceil_snap(dom.d as f64 * dom.width() / (2.0 * r)) as usize).max(1))
}

/// Midpoint grid whose 1-norm balls of radius `r` cover the cube.
pub fn covering_grid(dom: &HypercubeDomain, r: f64) -> Result<Vec<Vec<f64>>> {
    let m = covering_resolution(dom, r)?;
    let count = (m as f64).powi(dom.d as i32);
    if count > 1e8 {
        return Err(Error::BudgetExceeded(format!("covering grid would have {count:e} points")));
    }
    Ok(midpoint_grid(dom, m))
}

/// `3 d L (b - a) / A^{1/d}`.
pub fn approx_bound(d: usize, lipschitz: f64, a: f64, b: f64, resolution: f64) -> f64 {
    3.0 * d as f64 * lipschitz * (b - a) / resolution.powf(1.0 / d as f64)
}

/// `L (b - a) / A`, the 1-D interpolation guarantee.
pub fn interp1d_bound(lipschitz: f64, a: f64, b: f64, resolution: f64) -> f64 {
    lipschitz * (b - a) / resolution
}

/// `ℨ = ⌊(A / 2d)^{1/d}⌋`: the largest integer with `2d ℨ^d <= A`.
pub fn grid_per_axis(d: usize, resolution: f64) -> usize {
    let df = d as f64;
    let mut z = floor_snap((resolution / (2.0 * df)).powf(1.0 / df)).max(0.0) as usize;
    let fits = |z: usize| at_least(resolution, 2.0 * df * (z as f64).powi(d as i32));
    while fits(z + 1) {
        z += 1;
    }
    while z > 0 && !fits(z) {
        z -= 1;
    }
    z
}

/// `6^d`, the threshold above which the maximum-convolution construction is used.
pub fn small_resolution_threshold(d: usize) -> f64 {
    6f64.powi(d as i32)
}

/// Checks the architecture hypotheses of the multidimensional approximator.
pub fn check_approximator_arch(d: usize, resolution: f64, l: &Architecture) -> Result<()> {
    let fail = |m: String| Err(Error::Hypothesis(m));
    if !(resolution > 0.0 && resolution.is_finite()) {
        return fail(format!("A must be positive and finite, got {resolution}"));
    }
    if l.input_dim() != d {
        return fail(format!("l_0 = {} but d = {d}", l.input_dim()));
    }
    if l.output_dim() != 1 {
        return fail(format!("l_L = {} but must be 1", l.output_dim()));
    }
    if resolution <= small_resolution_threshold(d) {
        return Ok(());
    }
    let depth = l.depth();
    let need_depth = 2 + ceil_log2(resolution / (2.0 * d as f64));
    if (depth as i64) < need_depth {
        return fail(format!("depth {depth} is below 1 + (⌈log2(A/2d)⌉ + 1) = {need_depth}"));
    }
    if !at_least(l.dim(1) as f64, resolution) {
        return fail(format!("l_1 = {} is below A = {resolution}", l.dim(1)));
    }
    for i in 2..depth {
        let need = 3.0 * ceil_snap(resolution / (2f64.powi(i as i32) * d as f64));
        if (l.dim(i) as f64) < need {
            return fail(format!("l_{i} = {} is below 3⌈A/(2^{i} d)⌉ = {need}", l.dim(i)));
        }
    }
    Ok(())
}

/// Smallest architecture accepted by [`build_approximator`] for resolution `A`.
pub fn minimal_architecture(d: usize, resolution: f64) -> Result<Architecture> {
    if resolution <= small_resolution_threshold(d) {
        return Architecture::new(vec![d, 1]);
    }
    let depth = (2 + ceil_log2(resolution / (2.0 * d as f64))) as usize;
    Architecture::new(resolution_dims(d, resolution, depth))
}

/// `(d, ⌈A⌉, 3⌈A/(4d)⌉, ..., 3⌈A/(2^{L-1} d)⌉, 1)`.
fn resolution_dims(d: usize, resolution: f64, depth: usize) -> Vec<usize> {
    let mut dims = vec![d];
    if depth >= 2 {
        dims.push(ceil_snap(resolution) as usize);
        for i in 2..depth {
            dims.push(3 * ceil_snap(resolution / (2f64.powi(i as i32) * d as f64)) as usize);
        }
    }
    dims.push(1);
    dims
}

fn check_range(f: &dyn TargetOracle, bounds: ClipBounds) -> Result<()> {
    let (lo, hi) = f.range();
    if lo < bounds.u() || hi > bounds.v() {
        return Err(Error::Hypothesis(format!(
            "target range [{lo}, {hi}] is not inside the clip interval [{}, {}]",
            bounds.u(),
            bounds.v()
        )));
    }
    Ok(())
}

/// Result of [`lipschitz_spot_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzCheck {
    pub pairs: usize,
    pub declared: f64,
    pub max_ratio: f64,
    pub violated: bool,
}

/// Largest difference quotient `|f(x) - f(y)| / ||x - y||_1` over random pairs.
pub fn lipschitz_spot_check(f: &dyn TargetOracle, dom: &HypercubeDomain, pairs: usize, seed: u64) -> LipschitzCheck {
    let mut rng = rng::stream(seed, &[0x11f5]);
    let (mut x, mut y) = (vec![0.0; dom.d], vec![0.0; dom.d]);
    let mut max_ratio = 0.0f64;
    for _ in 0..pairs {
        dom.sample_into(&mut rng, &mut x);
        dom.sample_into(&mut rng, &mut y);
        let dist: f64 = x.iter().zip(&y).map(|(p, q)| (p - q).abs()).sum();
        if dist > 0.0 {
            max_ratio = max_ratio.max((f.eval(&x) - f.eval(&y)).abs() / dist);
        }
    }
    let declared = f.lipschitz();
    LipschitzCheck {
        pairs,
        declared,
        max_ratio,
        violated: max_ratio > declared * (1.0 + 1e-9) + 1e-12,
    }
}

fn warn_if_not_lipschitz(f: &dyn TargetOracle, dom: &HypercubeDomain) {
    let check = lipschitz_spot_check(f, dom, LIPSCHITZ_PAIRS, 0);
    if check.violated {
        log::warn!(
            "target exceeds its declared Lipschitz constant {}: observed difference quotient {}",
            check.declared,
            check.max_ratio
        );
    }
}

/// Parameters `ϑ` for architecture `l` with
/// `sup |N^{ϑ,l}_{u,v} - f| <= 3 d L (b - a) / A^{1/d}`.
///
/// For `A > 6^d` the maximum-convolution net over the `ℨ^d` cell midpoints,
/// `ℨ = ⌊(A/2d)^{1/d}⌋`, is embedded into `l`. Otherwise the constant network
/// `f(midpoint)` is returned.
pub fn build_approximator(
    f: &dyn TargetOracle,
    dom: &HypercubeDomain,
    resolution: f64,
    l: &Architecture,
    bounds: ClipBounds,
) -> Result<ParamVector> {
    check_approximator_arch(dom.d, resolution, l)?;
    check_range(f, bounds)?;
    warn_if_not_lipschitz(f, dom);

    if resolution <= small_resolution_threshold(dom.d) {
        let mut p = ParamVector::zeros(l.clone());
        let last = p.len() - 1;
        p.theta_mut()[last] = f.eval(&dom.midpoint());
        return Ok(p);
    }
    let z = grid_per_axis(dom.d, resolution);
    let centers = midpoint_grid(dom, z);
    let values = centers.iter().map(|c| f.eval(c)).collect();
    let net = max_convolution_net(&MaxConvSpec::new(f.lipschitz(), centers, values)?)?;
    Ok(flatten(&embed(&net, l)?))
}

/// `max{1, L, |a|, |b|, 2 sup|f|}`.
pub fn approximator_weight_bound(f: &dyn TargetOracle, dom: &HypercubeDomain) -> f64 {
    let (lo, hi) = f.range();
    1f64.max(f.lipschitz())
        .max(dom.a.abs())
        .max(dom.b.abs())
        .max(2.0 * lo.abs().max(hi.abs()))
}

/// Checks the hypotheses of the 1-D interpolation approximator.
pub fn check_interp1d_arch(resolution: f64, l: &Architecture) -> Result<()> {
    let fail = |m: String| Err(Error::Hypothesis(m));
    if !(resolution > 0.0 && resolution.is_finite()) {
        return fail(format!("A must be positive and finite, got {resolution}"));
    }
    if l.depth() < 2 {
        return fail(format!("depth {} is below 2", l.depth()));
    }
    if l.input_dim() != 1 || l.output_dim() != 1 {
        return fail(format!("l_0 and l_L must both be 1, got {l}"));
    }
    if !at_least(l.dim(1) as f64, resolution + 2.0) {
        return fail(format!("l_1 = {} is below A + 2 = {}", l.dim(1), resolution + 2.0));
    }
    if let Some(i) = (2..l.depth()).find(|&i| l.dim(i) < 2) {
        return fail(format!("l_{i} = {} is below 2", l.dim(i)));
    }
    Ok(())
}

/// Parameters with `sup |N^{ϑ,l}_{u,v} - f| <= L (b - a) / A` on `[a, b]`, built
/// from the piecewise-linear interpolant on `⌈A⌉` uniform cells.
pub fn build_interp1d_approximator(
    f: &dyn TargetOracle,
    dom: &HypercubeDomain,
    resolution: f64,
    l: &Architecture,
    bounds: ClipBounds,
) -> Result<ParamVector> {
    if dom.d != 1 {
        return Err(Error::Hypothesis(format!("interpolation needs d = 1, got {}", dom.d)));
    }
    check_interp1d_arch(resolution, l)?;
    check_range(f, bounds)?;
    warn_if_not_lipschitz(f, dom);
    let spec = Interp1dSpec::sample(dom.a, dom.b, resolution, |x| f.eval(&[x]))?;
    Ok(flatten(&embed(&interp1d_net(&spec)?, l)?))
}

/// `max{1, 2L, sup|f|, |a|, |b|}`.
pub fn interp1d_weight_bound(f: &dyn TargetOracle, dom: &HypercubeDomain) -> f64 {
    let (lo, hi) = f.range();
    1f64.max(2.0 * f.lipschitz())
        .max(lo.abs().max(hi.abs()))
        .max(dom.a.abs())
        .max(dom.b.abs())
}

/// Architecture and size guarantees for target accuracy `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsArchitecture {
    pub epsilon: f64,
    /// `A = (3 d L (b - a) / ε)^d`.
    pub resolution: f64,
    pub arch: Architecture,
    pub param_count: usize,
    /// `C` of the parameter bound `P <= C ε^{-2d}`.
    pub c_const: f64,
    /// `C ε^{-2d}`.
    pub param_bound: f64,
    /// `max{log_2(3 L (b - a)) + 1, 0}`.
    pub depth_const: f64,
    /// `d (log_2(1/ε) + log_2 d + depth_const)`.
    pub depth_bound: f64,
}

pub fn eps_architecture(d: usize, lipschitz: f64, a: f64, b: f64, epsilon: f64) -> Result<EpsArchitecture> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidParameter(format!("ε must lie in (0, 1], got {epsilon}")));
    }
    let dom = HypercubeDomain::new(a, b, d)?;
    if !(lipschitz >= 0.0 && lipschitz.is_finite()) {
        return Err(Error::InvalidParameter(format!("L must be finite and nonnegative, got {lipschitz}")));
    }
    let df = d as f64;
    let q = 3.0 * df * lipschitz * dom.width();
    let raw = (q / epsilon).powi(d as i32);
    let snapped = raw.round();
    let resolution = if (raw - snapped).abs() <= REL_TOL * snapped.max(1.0) { snapped } else { raw };
    if resolution > 1e9 {
        return Err(Error::BudgetExceeded(format!("A = {resolution:e} gives an architecture too large to build")));
    }
    let depth = if resolution <= 0.0 {
        1
    } else {
        (2 + ceil_log2(resolution / (2.0 * df))).max(1) as usize
    };
    let arch = Architecture::new(resolution_dims(d, resolution, depth))?;
    let c_const = 9.0 / 8.0 * q.powi(2 * d as i32) + (df + 19.0) * q.powi(d as i32) + df + 11.0;
    let depth_const = ((3.0 * lipschitz * dom.width()).log2() + 1.0).max(0.0);
    Ok(EpsArchitecture {
        epsilon,
        resolution,
        param_count: arch.param_count(),
        arch,
        c_const,
        param_bound: c_const * epsilon.powi(-2 * d as i32),
        depth_const,
        depth_bound: df * ((1.0 / epsilon).log2() + df.log2() + depth_const),
    })
}

/// Uniform grid with `points_per_axis` points per axis, endpoints included.
pub fn dense_axis(dom: &HypercubeDomain, points_per_axis: usize) -> Vec<f64> {
    let n = points_per_axis;
    (0..n)
        .map(|i| if i + 1 == n { dom.b } else { dom.a + dom.width() * i as f64 / (n - 1) as f64 })
        .collect()
}

/// `max |N^{θ,l}_{u,v}(x) - f(x)|` over the dense grid; a lower bound for the sup norm.
pub fn sup_error_estimate(
    theta: &ParamVector,
    bounds: ClipBounds,
    f: &dyn TargetOracle,
    dom: &HypercubeDomain,
    points_per_axis: usize,
) -> Result<f64> {
    sup_error_estimate_with_budget(theta, bounds, f, dom, points_per_axis, DEFAULT_GRID_BUDGET)
}

pub fn sup_error_estimate_with_budget(
    theta: &ParamVector,
    bounds: ClipBounds,
    f: &dyn TargetOracle,
    dom: &HypercubeDomain,
    points_per_axis: usize,
    budget: usize,
) -> Result<f64> {
    if points_per_axis < 2 {
        return Err(Error::InvalidParameter("points_per_axis must be at least 2".into()));
    }
    if theta.arch().input_dim() != dom.d || theta.arch().output_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: dom.d,
            got: theta.arch().input_dim(),
        });
    }
    let cost = (points_per_axis as f64).powi(dom.d as i32) * dom.d as f64;
    if cost > budget as f64 {
        return Err(Error::BudgetExceeded(format!(
            "grid of {points_per_axis}^{} points exceeds the budget {budget}",
            dom.d
        )));
    }
    let axis = dense_axis(dom, points_per_axis);
    const CHUNK: usize = 4096;
    let mut buf = Vec::with_capacity(CHUNK * dom.d);
    let mut targets = Vec::with_capacity(CHUNK);
    let mut worst = 0.0f64;
    let mut flush = |buf: &mut Vec<f64>, targets: &mut Vec<f64>| -> Result<()> {
        if buf.is_empty() {
            return Ok(());
        }
        let out = forward_batch(theta.theta(), theta.arch(), bounds, buf)?;
        for (o, t) in out.iter().zip(targets.iter()) {
            worst = worst.max((o - t).abs());
        }
        buf.clear();
        targets.clear();
        Ok(())
    };
    let mut result = Ok(());
    for_each_grid_point(&axis, dom.d, |x| {
        if result.is_err() {
            return;
        }
        buf.extend_from_slice(x);
        targets.push(f.eval(x));
        if targets.len() == CHUNK {
            result = flush(&mut buf, &mut targets);
        }
    });
    result?;
    flush(&mut buf, &mut targets)?;
    Ok(worst)
}

/// Which construction [`run_approx`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxMethod {
    MaxConvolution,
    Interp1d,
}

/// Inputs of [`run_approx`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxConfig {
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub target: TargetFamily,
    /// Resolution `A`; exactly one of `resolution` and `epsilon` must be set.
    pub resolution: Option<f64>,
    pub epsilon: Option<f64>,
    /// Defaults to the smallest admissible architecture.
    pub arch: Option<Architecture>,
    /// Defaults to the target's range.
    pub clip: Option<ClipBounds>,
    pub points_per_axis: usize,
    pub method: ApproxMethod,
}

/// Outcome of one approximation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub schema_version: u32,
    pub method: ApproxMethod,
    pub construction: String,
    pub target: TargetFamily,
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub lipschitz: f64,
    pub resolution: f64,
    pub epsilon: Option<f64>,
    pub architecture: Architecture,
    pub clip: ClipBounds,
    pub param_count: usize,
    pub param_sup_norm: f64,
    pub param_bound: f64,
    pub theoretical_bound: f64,
    pub measured_sup_error: f64,
    pub points_per_axis: usize,
    pub bound_satisfied: bool,
    pub lipschitz_check: LipschitzCheck,
    pub warnings: Vec<String>,
}

/// Default clip interval: the target range, widened when it is a single point.
pub fn default_clip(range: (f64, f64)) -> Result<ClipBounds> {
    let (lo, hi) = range;
    if lo < hi {
        ClipBounds::new(lo, hi)
    } else {
        ClipBounds::new(lo - 0.5, hi + 0.5)
    }
}

/// Builds an approximator for the configured target and measures it.
pub fn run_approx(cfg: &ApproxConfig) -> Result<(ApproxReport, ParamVector)> {
    let dom = HypercubeDomain::new(cfg.a, cfg.b, cfg.d)?;
    let f = cfg.target.on(dom)?;
    let lip = f.lipschitz();
    let (resolution, eps_arch) = match (cfg.resolution, cfg.epsilon) {
        (Some(r), None) => (r, None),
        (None, Some(eps)) => {
            let e = eps_architecture(cfg.d, lip, cfg.a, cfg.b, eps)?;
            (e.resolution, Some(e.arch))
        }
        _ => {
            return Err(Error::InvalidParameter("set exactly one of resolution (A) and epsilon".into()));
        }
    };
    let clip = match cfg.clip {
        Some(c) => c,
        None => default_clip(f.range())?,
    };
    let (theta, bound, param_bound, construction) = match cfg.method {
        ApproxMethod::MaxConvolution => {
            let arch = match (&cfg.arch, eps_arch) {
                (Some(a), _) => a.clone(),
                (None, Some(a)) => a,
                (None, None) => minimal_architecture(cfg.d, resolution)?,
            };
            let theta = build_approximator(&f, &dom, resolution, &arch, clip)?;
            let construction = if resolution > small_resolution_threshold(cfg.d) {
                "max-convolution"
            } else {
                "constant"
            };
            let bound = match cfg.epsilon {
                Some(eps) => eps.max(approx_bound(cfg.d, lip, cfg.a, cfg.b, resolution)),
                None => approx_bound(cfg.d, lip, cfg.a, cfg.b, resolution),
            };
            (theta, bound, approximator_weight_bound(&f, &dom), construction)
        }
        ApproxMethod::Interp1d => {
            if cfg.epsilon.is_some() {
                return Err(Error::InvalidParameter("epsilon mode applies to the max-convolution method".into()));
            }
            let arch = match &cfg.arch {
                Some(a) => a.clone(),
                None => Architecture::new(vec![1, ceil_snap(resolution + 2.0) as usize, 1])?,
            };
            let theta = build_interp1d_approximator(&f, &dom, resolution, &arch, clip)?;
            (
                theta,
                interp1d_bound(lip, cfg.a, cfg.b, resolution),
                interp1d_weight_bound(&f, &dom),
                "interp1d",
            )
        }
    };
    let measured = sup_error_estimate(&theta, clip, &f, &dom, cfg.points_per_axis)?;
    let lipschitz_check = lipschitz_spot_check(&f, &dom, LIPSCHITZ_PAIRS, 0);
    let mut warnings = Vec::new();
    if lipschitz_check.violated {
        warnings.push(format!(
            "observed difference quotient {} exceeds the declared Lipschitz constant {}",
            lipschitz_check.max_ratio, lipschitz_check.declared
        ));
    }
    let report = ApproxReport {
        schema_version: crate::SCHEMA_VERSION,
        method: cfg.method,
        construction: construction.into(),
        target: cfg.target.clone(),
        d: cfg.d,
        a: cfg.a,
        b: cfg.b,
        lipschitz: lip,
        resolution,
        epsilon: cfg.epsilon,
        architecture: theta.arch().clone(),
        clip,
        param_count: theta.arch().param_count(),
        param_sup_norm: theta.sup_norm(),
        param_bound,
        theoretical_bound: bound,
        measured_sup_error: measured,
        points_per_axis: cfg.points_per_axis,
        bound_satisfied: measured <= bound,
        lipschitz_check,
        warnings,
    };
    Ok((report, theta))
}
