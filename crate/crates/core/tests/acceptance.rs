//! Acceptance suite. Each criterion runs at its stated tolerance and prints one
//! PASS/FAIL line; the process exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::Rng as _;
use serde_json::json;

use common::{random_dims, random_net, uniform_vec};
use reluapprox::algebra::{compose, parallelize};
use reluapprox::approx::{
    approx_bound, approximator_weight_bound, build_approximator, build_interp1d_approximator, eps_architecture,
    interp1d_bound, interp1d_weight_bound, minimal_architecture, sup_error_estimate, HypercubeDomain,
};
use reluapprox::constructive::{interp1d_net, l1_norm_net, max_convolution_net, max_net, Interp1dSpec, MaxConvSpec};
use reluapprox::experiment::{run_experiment, ExperimentConfig};
use reluapprox::montecarlo::{distribution_battery, FiniteDistribution};
use reluapprox::params::{flatten, realize_clipped_vec};
use reluapprox::rng::stream;
use reluapprox::targets::{FnTarget, TargetFamily, TargetOracle};
use reluapprox::train::{empirical_risk, risk_gradient, SampleSet, Schedule, TrainConfig};
use reluapprox::{Architecture, ClipBounds, StructuredNetwork};

const SEED: u64 = 20_240_601;

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn within_time(elapsed: Duration, limit_s: u64, what: &str) -> std::result::Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s as f64, || {
        format!("{what} took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

/// Pairs `(f, g)` with `g`'s output dimension equal to `f`'s input dimension.
fn calculus_battery() -> Vec<(StructuredNetwork, StructuredNetwork)> {
    let mut rng = stream(SEED, &[1]);
    (0..200)
        .map(|_| {
            let (gl, fl) = (rng.random_range(1..=4), rng.random_range(1..=4));
            let gd = random_dims(&mut rng, gl, 8);
            let mut fd = random_dims(&mut rng, fl, 8);
            fd[0] = *gd.last().unwrap();
            (random_net(&mut rng, &fd, 2.0), random_net(&mut rng, &gd, 2.0))
        })
        .collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut rng = stream(SEED, &[2]);
    let (mut worst_c, mut worst_p) = (0.0f64, 0.0f64);
    for (f, g) in calculus_battery() {
        let fg = compose(&f, &g).map_err(err)?;
        // parallel partner with the depth of g
        let mut hd = random_dims(&mut rng, g.depth(), 8);
        hd[0] = rng.random_range(1..=8);
        let h = random_net(&mut rng, &hd, 2.0);
        let gh = parallelize(&[&g, &h]).map_err(err)?;
        for _ in 0..100 {
            let x = uniform_vec(&mut rng, g.input_dim(), 1.0);
            let direct = f.realize_relu(&g.realize_relu(&x).map_err(err)?).map_err(err)?;
            worst_c = worst_c.max(max_dev(&fg.realize_relu(&x).map_err(err)?, &direct));
            let y = uniform_vec(&mut rng, h.input_dim(), 1.0);
            let mut tuple = g.realize_relu(&x).map_err(err)?;
            tuple.extend(h.realize_relu(&y).map_err(err)?);
            let xy: Vec<f64> = x.iter().chain(&y).copied().collect();
            worst_p = worst_p.max(max_dev(&gh.realize_relu(&xy).map_err(err)?, &tuple));
        }
    }
    ensure(worst_c <= 1e-12, || format!("compose deviation {worst_c:e}"))?;
    ensure(worst_p <= 1e-12, || format!("parallelize deviation {worst_p:e}"))?;
    within_time(start.elapsed(), 10, "battery")?;
    Ok(format!("200 pairs x 100 inputs; compose dev {worst_c:.1e}, parallel dev {worst_p:.1e}"))
}

fn criterion_2() -> Check {
    let mut rng = stream(SEED, &[3]);
    let bounds = [
        ClipBounds::unbounded(),
        ClipBounds::new(0.0, 1.0).map_err(err)?,
        ClipBounds::new(-1.0, 3.0).map_err(err)?,
    ];
    let mut worst = 0.0f64;
    for (f, g) in calculus_battery() {
        for net in [&f, &g] {
            let theta = flatten(net);
            for b in bounds {
                for _ in 0..100 {
                    let x = uniform_vec(&mut rng, net.input_dim(), 1.0);
                    let structured: Vec<f64> = net.realize_relu(&x).map_err(err)?.iter().map(|v| b.clip(*v)).collect();
                    let flat = realize_clipped_vec(theta.theta(), theta.arch(), b, &x).map_err(err)?;
                    worst = worst.max(max_dev(&structured, &flat));
                }
            }
        }
    }
    ensure(worst <= 1e-12, || format!("deviation {worst:e}"))?;
    Ok(format!("400 nets x 3 clip intervals x 100 inputs; dev {worst:.1e}"))
}

fn unit_weights_zero_bias(net: &StructuredNetwork) -> bool {
    net.layers().iter().all(|l| {
        l.weights().data().iter().all(|w| [-1.0, 0.0, 1.0].contains(w)) && l.bias().iter().all(|b| *b == 0.0)
    })
}

fn criterion_3() -> Check {
    let mut rng = stream(SEED, &[4]);
    let mut worst = 0.0f64;
    for d in 1..=32 {
        let net = l1_norm_net(d).map_err(err)?;
        ensure(net.arch().dims() == [d, 2 * d, 1], || format!("d={d}: arch {}", net.arch()))?;
        ensure(unit_weights_zero_bias(&net), || format!("d={d}: weights/biases"))?;
        for _ in 0..1000 {
            let x = uniform_vec(&mut rng, d, 10.0);
            let exact: f64 = x.iter().map(|v| v.abs()).sum();
            worst = worst.max((net.realize_relu(&x).map_err(err)?[0] - exact).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("deviation {worst:e}"))?;
    Ok(format!("d = 1..32, 1000 points each; dev {worst:.1e}"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut rng = stream(SEED, &[5]);
    let mut worst = 0.0f64;
    for d in 2..=64usize {
        let net = max_net(d).map_err(err)?;
        let h = (d as f64).log2().ceil() as usize;
        ensure(net.hidden_layers() == h, || format!("d={d}: {} hidden layers, expected {h}", net.hidden_layers()))?;
        for i in 1..=net.depth() {
            let bound = 3 * d.div_ceil(1 << i);
            let di = net.layer_dim(i).unwrap();
            ensure(di <= bound, || format!("d={d}: D_{i} = {di} > {bound}"))?;
        }
        ensure(unit_weights_zero_bias(&net), || format!("d={d}: weights/biases"))?;
        for t in 0..200 {
            let mut x = uniform_vec(&mut rng, d, 5.0);
            if t % 2 == 1 {
                // ties: repeat the maximum and a few other values
                let m = rng.random_range(0..d);
                for j in 0..d {
                    if rng.random_bool(0.5) {
                        x[j] = x[m];
                    }
                }
            }
            if t == 0 {
                x.iter_mut().for_each(|v| *v = 1.25);
            }
            let exact = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max((net.realize_relu(&x).map_err(err)?[0] - exact).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("deviation {worst:e}"))?;
    within_time(start.elapsed(), 30, "max nets")?;
    Ok(format!("d = 2..64, 200 inputs each (half tied); dev {worst:.1e}"))
}

fn criterion_5() -> Check {
    let mut rng = stream(SEED, &[6]);
    let mut worst = 0.0f64;
    for s in 0..20 {
        let d = rng.random_range(1..=4);
        let k = rng.random_range(2..=32usize);
        let lip = rng.random_range(0.0..=3.0);
        let centers: Vec<Vec<f64>> = (0..k).map(|_| uniform_vec(&mut rng, d, 2.0)).collect();
        let values = uniform_vec(&mut rng, k, 3.0);
        let spec = MaxConvSpec::new(lip, centers.clone(), values.clone()).map_err(err)?;
        let net = max_convolution_net(&spec).map_err(err)?;
        let h = (k as f64).log2().ceil() as usize + 1;
        ensure(net.hidden_layers() == h, || format!("spec {s}: H = {}, expected {h}", net.hidden_layers()))?;
        ensure(net.layer_dim(1) == Some(2 * d * k), || format!("spec {s}: D_1 = {:?}", net.layer_dim(1)))?;
        for i in 2..=net.depth() {
            let bound = 3 * k.div_ceil(1 << (i - 1));
            let di = net.layer_dim(i).unwrap();
            ensure(di <= bound, || format!("spec {s}: D_{i} = {di} > {bound}"))?;
        }
        let xmax = centers.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let ymax = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let wb = 1f64.max(lip).max(xmax).max(2.0 * ymax);
        let sup = flatten(&net).sup_norm();
        ensure(sup <= wb, || format!("spec {s}: ||θ|| = {sup} > {wb}"))?;
        for _ in 0..1000 {
            let x = uniform_vec(&mut rng, d, 3.0);
            worst = worst.max((net.realize_relu(&x).map_err(err)?[0] - spec.eval(&x)).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("deviation {worst:e}"))?;
    Ok(format!("20 specs, 1000 points each; dev {worst:.1e}"))
}

fn criterion_6() -> Check {
    let dom = HypercubeDomain::unit(1).map_err(err)?;
    let sin3 = FnTarget::new(|x: &[f64]| (3.0 * x[0]).sin() / 3.0, 1.0, (-1.0 / 3.0, 1.0 / 3.0));
    let absd = FnTarget::new(|x: &[f64]| (x[0] - 0.5).abs(), 1.0, (0.0, 0.5));
    let targets: [(&str, &dyn TargetOracle); 2] = [("sin(3x)/3", &sin3), ("|x-0.5|", &absd)];
    let mut lines = Vec::new();
    for (name, f) in targets {
        let (lo, hi) = f.range();
        let clip = ClipBounds::new(lo, hi).map_err(err)?;
        for a in [4.0, 16.0, 64.0] {
            let spec = Interp1dSpec::sample(0.0, 1.0, a, |x| f.eval(&[x])).map_err(err)?;
            let raw = interp1d_net(&spec).map_err(err)?;
            let mut node_dev = 0.0f64;
            for i in 0..=spec.cells() {
                let r = spec.node(i);
                node_dev = node_dev.max((raw.realize_relu(&[r]).map_err(err)?[0] - f.eval(&[r])).abs());
            }
            ensure(node_dev <= 1e-12, || format!("{name}, A={a}: node deviation {node_dev:e}"))?;
            let l = Architecture::new(vec![1, a as usize + 2, 1]).map_err(err)?;
            let theta = build_interp1d_approximator(f, &dom, a, &l, clip).map_err(err)?;
            let sup = sup_error_estimate(&theta, clip, f, &dom, 10_000).map_err(err)?;
            let bound = interp1d_bound(1.0, 0.0, 1.0, a);
            ensure(sup <= bound, || format!("{name}, A={a}: sup error {sup} > {bound}"))?;
            let wb = interp1d_weight_bound(f, &dom);
            ensure(theta.sup_norm() <= wb, || format!("{name}, A={a}: ||θ|| = {} > {wb}", theta.sup_norm()))?;
            lines.push(format!("{name} A={a}: {sup:.2e}<={bound:.2e}"));
        }
    }
    Ok(lines.join("; "))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let mut lines = Vec::new();
    for d in 1..=3usize {
        let dom = HypercubeDomain::unit(d).map_err(err)?;
        let six = 6f64.powi(d as i32);
        let points = [0, 2001, 201, 25][d];
        for family in ["abs-dist", "l1-norm"] {
            let f = TargetFamily::from_name(family).map_err(err)?.on(dom).map_err(err)?;
            let (lo, hi) = f.range();
            let clip = ClipBounds::new(lo, hi).map_err(err)?;
            for a in [six + 1.0, 4.0 * six, 100.0 * d as f64, 2.0] {
                let l = minimal_architecture(d, a).map_err(err)?;
                let theta = build_approximator(&f, &dom, a, &l, clip).map_err(err)?;
                let sup = sup_error_estimate(&theta, clip, &f, &dom, points).map_err(err)?;
                let bound = approx_bound(d, f.lipschitz(), 0.0, 1.0, a);
                ensure(sup <= bound, || format!("{family}, d={d}, A={a}: sup error {sup} > {bound}"))?;
                let wb = approximator_weight_bound(&f, &dom);
                ensure(theta.sup_norm() <= wb, || {
                    format!("{family}, d={d}, A={a}: ||θ|| = {} > {wb}", theta.sup_norm())
                })?;
                lines.push(format!("d={d} {family} A={a}: {sup:.3}<={bound:.3}"));
            }
        }
    }
    within_time(start.elapsed(), 120, "multidimensional approximation")?;
    Ok(format!("{} cases ({:.1} s)", lines.len(), start.elapsed().as_secs_f64()))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut lines = Vec::new();
    for d in 1..=2usize {
        let dom = HypercubeDomain::unit(d).map_err(err)?;
        let f = TargetFamily::L1Norm.on(dom).map_err(err)?;
        let clip = ClipBounds::new(0.0, d as f64).map_err(err)?;
        for inv_eps in [2u64, 5, 10] {
            let eps = 1.0 / inv_eps as f64;
            let e = eps_architecture(d, 1.0, 0.0, 1.0, eps).map_err(err)?;
            // C ε^{-2d} with L = 1, b - a = 1 and ε = 1/n, scaled by 8 to stay integral
            let (q, du) = (3 * d as u128, d as u128);
            let c8 = 9 * q.pow(2 * d as u32) + 8 * (du + 19) * q.pow(d as u32) + 8 * (du + 11);
            let n2d = (inv_eps as u128).pow(2 * d as u32);
            let p = e.arch.param_count();
            ensure(8 * p as u128 <= c8 * n2d, || format!("d={d}, ε=1/{inv_eps}: P = {p} > {}", c8 * n2d / 8))?;
            // H <= d (log2 n + log2 d + log2 3 + 1)  <=>  2^H <= (6 n d)^d
            let h = e.arch.hidden_layers();
            let rhs = (6 * inv_eps as u128 * du).pow(d as u32);
            ensure(1u128 << h <= rhs, || format!("d={d}, ε=1/{inv_eps}: 2^H = {} > {rhs}", 1u128 << h))?;
            let theta = build_approximator(&f, &dom, e.resolution, &e.arch, clip).map_err(err)?;
            let points = if d == 1 { 4001 } else { 61 };
            let sup = sup_error_estimate(&theta, clip, &f, &dom, points).map_err(err)?;
            ensure(sup <= eps, || format!("d={d}, ε={eps}: sup error {sup} > ε"))?;
            lines.push(format!("d={d} ε={eps}: P={p}, H={h}, err={sup:.3}"));
        }
    }
    Ok(format!("{} ({:.1} s)", lines.join("; "), start.elapsed().as_secs_f64()))
}

/// Safe points for the gradient check and the JSON record of the comparison.
fn gradient_check() -> std::result::Result<(f64, String), String> {
    let archs = [vec![1, 3, 1], vec![2, 4, 1], vec![2, 8, 1], vec![1, 5, 5, 1], vec![2, 8, 8, 1]];
    let bounds = ClipBounds::new(-10.0, 10.0).map_err(err)?;
    let mut rng = stream(SEED, &[9]);
    let (mut found, mut attempts, mut worst) = (0usize, 0usize, 0.0f64);
    let mut records = Vec::new();
    while found < 100 {
        attempts += 1;
        if attempts > 100_000 {
            return Err("could not draw 100 safe points".into());
        }
        let l = Architecture::new(archs[found % archs.len()].clone()).map_err(err)?;
        let theta = uniform_vec(&mut rng, l.param_count(), 1.0);
        let m = 4;
        let xs = uniform_vec(&mut rng, m * l.input_dim(), 1.0);
        let ys = uniform_vec(&mut rng, m, 1.0);
        let samples = SampleSet::new(l.input_dim(), xs, ys).map_err(err)?;
        if !is_safe(&theta, &l, bounds, &samples) {
            continue;
        }
        found += 1;
        let g = risk_gradient(&theta, &l, bounds, &samples).map_err(err)?;
        let h = 1e-6;
        let mut point_worst = 0.0f64;
        for i in 0..theta.len() {
            let (mut tp, mut tm) = (theta.clone(), theta.clone());
            tp[i] += h;
            tm[i] -= h;
            let fd = (empirical_risk(&tp, &l, bounds, &samples).map_err(err)?
                - empirical_risk(&tm, &l, bounds, &samples).map_err(err)?)
                / (2.0 * h);
            if fd.abs().max(g[i].abs()) > 1e-8 {
                point_worst = point_worst.max((fd - g[i]).abs() / fd.abs().max(g[i].abs()));
            }
        }
        worst = worst.max(point_worst);
        records.push(json!({ "arch": l.dims(), "params": theta.len(), "max_rel_err": point_worst }));
    }
    let report = json!({ "seed": SEED, "points": found, "attempts": attempts, "max_rel_err": worst, "records": records });
    Ok((worst, serde_json::to_string_pretty(&report).map_err(err)?))
}

/// Every hidden pre-activation at least `1e-3` in magnitude and the output at
/// least `1e-3` inside the clip interval, for all samples.
fn is_safe(theta: &[f64], l: &Architecture, bounds: ClipBounds, samples: &SampleSet) -> bool {
    let net = reluapprox::unflatten(theta, l).unwrap();
    (0..samples.len()).all(|j| {
        let mut x = samples.x(j).to_vec();
        for (i, layer) in net.layers().iter().enumerate() {
            let z: Vec<f64> = layer.weights().mul_vec(&x).unwrap().iter().zip(layer.bias()).map(|(a, b)| a + b).collect();
            if i + 1 < net.depth() {
                if z.iter().any(|v| v.abs() < 1e-3) {
                    return false;
                }
                x = z.iter().map(|v| v.max(0.0)).collect();
            } else {
                return z[0] > bounds.u() + 1e-3 && z[0] < bounds.v() - 1e-3;
            }
        }
        unreachable!()
    })
}

fn criterion_9(store: &mut Vec<String>) -> Check {
    let (worst, report) = gradient_check()?;
    store.push(report);
    ensure(worst <= 1e-5, || format!("max relative error {worst:e}"))?;
    Ok(format!("100 safe points up to (2,8,8,1); max rel err {worst:.1e}"))
}

fn criterion_10() -> Check {
    let b = FiniteDistribution::bernoulli(0.5).map_err(err)?.sum_variance_identity(3).map_err(err)?;
    ensure(b.lhs == 0.75 && b.rhs == 0.75, || format!("Bernoulli(1/2), M=3: {} vs {}", b.lhs, b.rhs))?;
    let mut worst_eq = 0.0f64;
    for q in [0.2, 0.5, 0.9] {
        let dist = FiniteDistribution::bernoulli(q).map_err(err)?;
        for m in 1..=6 {
            let s = dist.sum_variance_identity(m).map_err(err)?;
            worst_eq = worst_eq.max((s.lhs - s.rhs).abs());
        }
    }
    ensure(worst_eq <= 1e-12, || format!("sum identity deviation {worst_eq:e}"))?;
    let battery = distribution_battery();
    let (mut lp_checks, mut var_checks, mut min_slack) = (0, 0, f64::INFINITY);
    for (i, dist) in battery.iter().enumerate() {
        for m in 1..=6 {
            let s = dist.sum_variance_identity(m).map_err(err)?;
            ensure((s.lhs - s.rhs).abs() <= 1e-12, || format!("law {i}, M={m}: identity {} vs {}", s.lhs, s.rhs))?;
        }
        for p in [2.0, 3.0, 4.0] {
            for m in 1..=6 {
                let s = dist.lp_mean_inequality(m, p).map_err(err)?;
                ensure(s.lhs <= s.rhs * (1.0 + 1e-12), || format!("law {i}, p={p}, M={m}: {} > {}", s.lhs, s.rhs))?;
                min_slack = min_slack.min(s.rhs - s.lhs);
                lp_checks += 1;
            }
            if dist.within_unit_interval() {
                let v = dist.vartrivial_check(p).map_err(err)?;
                ensure(v.lhs <= v.rhs, || format!("law {i}, p={p}: {} > 1/4", v.lhs))?;
                var_checks += 1;
            }
        }
    }
    Ok(format!(
        "identity dev {worst_eq:.1e}; {lp_checks} L^p inequalities (min slack {min_slack:.2e}); {var_checks} variance bounds"
    ))
}

fn experiment_config(restarts: usize) -> ExperimentConfig {
    ExperimentConfig {
        d: 1,
        a: 0.0,
        b: 1.0,
        target: TargetFamily::AbsDist { center: 0.5, scale: 1.0 },
        noise: 0.0,
        samples: 1000,
        train: TrainConfig {
            arch: Architecture::new(vec![1, 8, 1]).unwrap(),
            restarts,
            steps: 0,
            eligible_steps: vec![0],
            learning_rates: Schedule::Constant(0.0),
            batch_sizes: Schedule::Constant(1000),
            init_radius: 2.0,
            selection_radius: 2.0,
            clip: ClipBounds::new(0.0, 1.0).unwrap(),
            seed: 0,
        },
        repetitions: 20,
        test_samples: 10_000,
        variant: reluapprox::bounds::Variant::Intro,
        p: 1.0,
        resolution: None,
        bootstrap_resamples: 1000,
        seed: SEED,
    }
}

fn criterion_11(store: &mut Vec<String>) -> Check {
    let start = Instant::now();
    let many = run_experiment(&experiment_config(100)).map_err(err)?;
    let one = run_experiment(&experiment_config(1)).map_err(err)?;
    let elapsed = start.elapsed();
    store.push(many.to_json().map_err(err)?);
    store.push(one.to_json().map_err(err)?);
    ensure(many.bound_satisfied, || {
        format!("measured {} exceeds bound {}", many.summary.measured, many.bound.total)
    })?;
    let (m100, m1) = (many.summary.mean_l1_error, one.summary.mean_l1_error);
    let pooled = (many.summary.l1_std_error.powi(2) + one.summary.l1_std_error.powi(2)).sqrt();
    ensure(m100 <= m1 + 2.0 * pooled, || format!("K=100 mean {m100} > K=1 mean {m1} + 2·{pooled}"))?;
    within_time(elapsed, 120, "experiment")?;
    Ok(format!(
        "mean L1 error {m100:.4} (K=1: {m1:.4}); bound {:.1}, ratio {:.0}; {:.1} s",
        many.bound.total,
        many.ratio,
        elapsed.as_secs_f64()
    ))
}

fn criterion_12(first: &[String]) -> Check {
    let mut again = Vec::new();
    let (_, grad) = gradient_check()?;
    again.push(grad);
    again.push(run_experiment(&experiment_config(100)).map_err(err)?.to_json().map_err(err)?);
    again.push(run_experiment(&experiment_config(1)).map_err(err)?.to_json().map_err(err)?);
    ensure(first.len() == again.len(), || "criteria 9 and 11 did not produce reports".into())?;
    for (i, (a, b)) in first.iter().zip(&again).enumerate() {
        ensure(a == b, || format!("report {i} differs between runs"))?;
    }
    Ok(format!("{} reports byte-identical ({} bytes)", again.len(), again.iter().map(String::len).sum::<usize>()))
}

fn main() {
    let mut reports = Vec::new();
    let mut failed = 0;
    let mut record = |n: usize, name: &str, outcome: Check, elapsed: Duration| {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {n:>2} {name}: {detail} [{:.2} s]", elapsed.as_secs_f64());
    };
    macro_rules! run {
        ($n:expr, $name:expr, $body:expr) => {{
            let t = Instant::now();
            let outcome = $body;
            record($n, $name, outcome, t.elapsed());
        }};
    }
    run!(1, "calculus semantics", criterion_1());
    run!(2, "structured/vectorized equivalence", criterion_2());
    run!(3, "1-norm net", criterion_3());
    run!(4, "maximum net", criterion_4());
    run!(5, "maximum-convolution net", criterion_5());
    run!(6, "1-D approximation", criterion_6());
    run!(7, "multidimensional approximation", criterion_7());
    run!(8, "ε-architecture", criterion_8());
    run!(9, "gradient check", criterion_9(&mut reports));
    run!(10, "enumerated Monte Carlo facts", criterion_10());
    run!(11, "end-to-end experiment", criterion_11(&mut reports));
    run!(12, "determinism", criterion_12(&reports));
    if failed > 0 {
        println!("{failed} of 12 criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
