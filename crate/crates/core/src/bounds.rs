//! Closed-form error bounds: the generalization and optimization terms and the
//! three-term overall bounds, each with its hypotheses checked clause by clause.

use serde::{Deserialize, Serialize};

use crate::approx::check_approximator_arch;
use crate::arch::Architecture;
use crate::error::{Error, Result};

/// Everything any of the bounds may depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Input dimension `d`.
    pub d: usize,
    pub arch: Architecture,
    /// Number of samples `M`.
    pub m: u64,
    /// Number of restarts `K`.
    pub k: u64,
    pub p: f64,
    pub c: f64,
    pub beta: f64,
    pub u: f64,
    pub v: f64,
    /// Lipschitz constant `L` of the target.
    pub lipschitz: f64,
    pub a: f64,
    pub b: f64,
    /// Approximation resolution `A`, used by the theorem forms.
    #[serde(default)]
    pub resolution: Option<f64>,
}

impl BoundInputs {
    /// `𝐋`.
    pub fn depth(&self) -> usize {
        self.arch.depth()
    }

    /// `||l||_∞`.
    pub fn width(&self) -> f64 {
        self.arch.max_width() as f64
    }
}

/// Which overall bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Expected `L^1` error, unit cube, SGD with constant step.
    Intro,
    /// `L^p` norm of the `L^2` error, `d = 1`, in terms of `A`.
    #[serde(rename = "theo-1d")]
    Theo1d,
    /// `d = 1`, one hidden layer of width `ℓ`.
    #[serde(rename = "cor-1d")]
    Cor1d,
    /// `L^p` norm of the `L^2` error in terms of `A`.
    TheoMain,
    /// `L^p` norm of the `L^2` error in terms of depth and widths.
    CorMain,
    /// Expected `L^1` error on the unit cube in terms of depth and widths.
    CorSimple,
    /// Same right-hand side as [`Variant::CorSimple`].
    CorSgdSimple,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Intro,
        Variant::Theo1d,
        Variant::Cor1d,
        Variant::TheoMain,
        Variant::CorMain,
        Variant::CorSimple,
        Variant::CorSgdSimple,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Intro => "intro",
            Variant::Theo1d => "theo-1d",
            Variant::Cor1d => "cor-1d",
            Variant::TheoMain => "theo-main",
            Variant::CorMain => "cor-main",
            Variant::CorSimple => "cor-simple",
            Variant::CorSgdSimple => "cor-sgd-simple",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown bound variant '{s}'")))
    }

    /// The quantity the bound controls, in terms of the random `L^1` error
    /// `E1 = ∫|N - f| dP` and squared `L^2` error `E2 = ∫|N - f|^2 dP`.
    pub fn statistic(&self) -> &'static str {
        match self {
            Variant::Intro | Variant::CorSimple | Variant::CorSgdSimple => "E[E1]",
            Variant::Theo1d | Variant::TheoMain => "(E[E2^p])^(1/p)",
            Variant::Cor1d | Variant::CorMain => "(E[E2^(p/2)])^(1/p)",
        }
    }
}

/// The three summands and their sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub schema_version: u32,
    pub variant: Variant,
    pub statistic: String,
    pub approximation: f64,
    pub optimization: f64,
    pub generalization: f64,
    /// `approximation + optimization + generalization`, summed in that order.
    pub total: f64,
    pub measured: Option<f64>,
    pub inputs: BoundInputs,
}

fn hyp(clause: impl Into<String>) -> Error {
    Error::Hypothesis(clause.into())
}

fn require(ok: bool, clause: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(hyp(clause()))
    }
}

fn check_common(x: &BoundInputs) -> Result<()> {
    let finite = [x.p, x.c, x.beta, x.u, x.v, x.lipschitz, x.a, x.b].iter().all(|v| v.is_finite());
    require(finite, || "all real inputs must be finite".into())?;
    require(x.m >= 1, || "M >= 1".into())?;
    require(x.k >= 1, || "K >= 1".into())?;
    require(x.p > 0.0, || format!("p > 0 (p = {})", x.p))?;
    require(x.v > x.u, || format!("v > u (u = {}, v = {})", x.u, x.v))?;
    require(x.b > x.a, || format!("b > a (a = {}, b = {})", x.a, x.b))?;
    require(x.lipschitz >= 0.0, || format!("L >= 0 (L = {})", x.lipschitz))?;
    require(x.beta >= x.c, || format!("β >= c (β = {}, c = {})", x.beta, x.c))
}

fn check_c_at_least(x: &BoundInputs, clauses: &[(&str, f64)]) -> Result<()> {
    for &(name, value) in clauses {
        require(x.c >= value, || format!("c >= {name} (c = {}, {name} = {value})", x.c))?;
    }
    Ok(())
}

fn check_io(x: &BoundInputs) -> Result<()> {
    require(x.arch.input_dim() == x.d, || format!("l_0 = d (l_0 = {}, d = {})", x.arch.input_dim(), x.d))?;
    require(x.arch.output_dim() == 1, || format!("l_L = 1 (l_L = {})", x.arch.output_dim()))
}

fn resolution(x: &BoundInputs) -> Result<f64> {
    match x.resolution {
        Some(a) if a > 0.0 && a.is_finite() => Ok(a),
        Some(a) => Err(hyp(format!("A > 0 (A = {a})"))),
        None => Err(hyp("A must be given for this variant")),
    }
}

/// `ln` of `4 (v-u) 𝐋 (||l||+1)^𝐋 c^{𝐋+1} max{p,1} / K^{1/(𝐋(||l||+1)^2)}`.
fn ln_optimization(x: &BoundInputs, p: f64) -> f64 {
    let depth = x.depth() as f64;
    let w1 = x.width() + 1.0;
    (4.0 * (x.v - x.u) * depth * p.max(1.0)).ln() + depth * w1.ln() + (depth + 1.0) * x.c.ln()
        - (x.k as f64).ln() / (depth * w1 * w1)
}

/// `4 (v-u) 𝐋 (||l||_∞+1)^𝐋 c^{𝐋+1} max{p,1} / K^{1/(𝐋 (||l||_∞+1)^2)}`.
pub fn optimization_bound(x: &BoundInputs) -> Result<f64> {
    require(x.k >= 1, || "K >= 1".into())?;
    require(x.v > x.u, || "v > u".into())?;
    require(x.c > 0.0, || "c > 0".into())?;
    Ok(ln_optimization(x, x.p).exp())
}

/// `5 (v-u)^2 𝐋 (||l||_∞+1)^{3/2} max{p, ln(4Mβc)} / sqrt(M)`.
pub fn generalization_bound(x: &BoundInputs) -> Result<f64> {
    require(x.m >= 1, || "M >= 1".into())?;
    require(x.c >= 1.0, || format!("c >= 1 (c = {})", x.c))?;
    require(x.beta >= 1.0, || format!("β >= 1 (β = {})", x.beta))?;
    require(x.v >= x.u + 1.0, || format!("v >= u + 1 (u = {}, v = {})", x.u, x.v))?;
    require(x.p > 0.0, || "p > 0".into())?;
    let m = x.m as f64;
    Ok(5.0 * (x.v - x.u).powi(2) * x.depth() as f64 * (x.width() + 1.0).powf(1.5)
        * x.p.max((4.0 * m * x.beta * x.c).ln())
        / m.sqrt())
}

/// Generalization term of the theorem forms, with `max{v-u, 1}` in place of `v-u`.
fn generalization_term(x: &BoundInputs, p: f64) -> f64 {
    let m = x.m as f64;
    10.0 * (x.v - x.u).max(1.0).powi(2) * x.depth() as f64 * (x.width() + 1.0).powf(1.5)
        * p.max((4.0 * m * x.beta * x.c).ln())
        / m.sqrt()
}

/// `min{2^e, l_1, ..., l_{𝐋-1}}`.
fn min_width(arch: &Architecture, e: usize) -> f64 {
    let pow = 2f64.powi(e as i32);
    (1..arch.depth()).map(|i| arch.dim(i) as f64).fold(pow, f64::min)
}

fn check_unit_setting(x: &BoundInputs) -> Result<()> {
    check_io(x)?;
    require(x.c >= 2.0, || format!("c >= 2 (c = {})", x.c))?;
    require(x.a == 0.0 && x.b == 1.0, || format!("[a, b] = [0, 1] (got [{}, {}])", x.a, x.b))?;
    require(x.u == 0.0 && x.v == 1.0, || format!("[u, v] = [0, 1] (got [{}, {}])", x.u, x.v))?;
    require(x.lipschitz <= x.c, || format!("L <= c (L = {}, c = {})", x.lipschitz, x.c))?;
    require(x.beta == x.c, || format!("β = c (β = {}, c = {})", x.beta, x.c))
}

/// Checks the hypotheses of `variant` and evaluates its three terms.
pub fn overall_bound(x: &BoundInputs, variant: Variant) -> Result<BoundReport> {
    check_common(x)?;
    let depth = x.depth() as f64;
    let w1 = x.width() + 1.0;
    let (m, k, c, p) = (x.m as f64, x.k as f64, x.c, x.p);
    let (d, span, lip) = (x.d as f64, x.b - x.a, x.lipschitz);
    let (ua, va, aa, ba) = (x.u.abs(), x.v.abs(), x.a.abs(), x.b.abs());
    let (t1, t2, t3) = match variant {
        Variant::Intro => {
            check_unit_setting(x)?;
            (
                6.0 * d * c / min_width(&x.arch, x.depth()).powf(1.0 / d),
                (depth.ln() + depth * w1.ln() + (depth + 1.0) * c.ln() - k.ln() / (2.0 * depth * w1 * w1)).exp(),
                4.0 * c * depth * w1 * (std::f64::consts::E * m).ln() / m.powf(0.25),
            )
        }
        Variant::CorSimple | Variant::CorSgdSimple => {
            check_unit_setting(x)?;
            (
                3.0 * d * c / min_width(&x.arch, x.depth() - 1).powf(1.0 / d),
                (depth.ln() + depth * w1.ln() + (depth + 1.0) * c.ln() - k.ln() / (2.0 * depth * w1 * w1)).exp(),
                4.0 * c.sqrt() * depth * w1 * (std::f64::consts::E * m).ln() / (2.0 * m).powf(0.25),
            )
        }
        Variant::Theo1d => {
            check_c_at_least(x, &[("1", 1.0), ("|u|", ua), ("|v|", va), ("|a|", aa), ("|b|", ba), ("2L", 2.0 * lip)])?;
            let a = resolution(x)?;
            require(x.d == 1, || format!("d = 1 (d = {})", x.d))?;
            require(x.depth() >= 2, || format!("𝐋 >= 2 (𝐋 = {})", x.depth()))?;
            check_io(x)?;
            require(x.arch.dim(1) as f64 >= a + 2.0, || format!("l_1 >= A + 2 (l_1 = {}, A = {a})", x.arch.dim(1)))?;
            if let Some(i) = (2..x.depth()).find(|&i| x.arch.dim(i) < 2) {
                return Err(hyp(format!("l_{i} >= 2 (l_{i} = {})", x.arch.dim(i))));
            }
            (
                lip * lip * span * span / (a * a),
                ln_optimization(x, p).exp(),
                generalization_term(x, p),
            )
        }
        Variant::Cor1d => {
            check_c_at_least(
                x,
                &[("1", 1.0), ("2|u|", 2.0 * ua), ("2|v|", 2.0 * va), ("|a|", aa), ("|b|", ba), ("2L", 2.0 * lip)],
            )?;
            require(x.d == 1, || format!("d = 1 (d = {})", x.d))?;
            let dims = x.arch.dims();
            require(dims.len() == 3 && dims[0] == 1 && dims[2] == 1, || format!("l = (1, ℓ, 1) (l = {})", x.arch))?;
            let ell = dims[1] as f64;
            require(ell >= 3.0, || format!("ℓ >= 3 (ℓ = {ell})"))?;
            (
                3.0 * c * c / ell,
                4.0 * c * c * ell * p.max(1.0) / k.powf(0.25 / ((ell + 1.0) * (ell + 1.0))),
                6.0 * x.beta * c * ell * p.max((std::f64::consts::E * m).ln()) / m.powf(0.25),
            )
        }
        Variant::TheoMain => {
            check_c_at_least(
                x,
                &[("1", 1.0), ("2|u|", 2.0 * ua), ("2|v|", 2.0 * va), ("|a|", aa), ("|b|", ba), ("L", lip)],
            )?;
            let a = resolution(x)?;
            check_approximator_arch(x.d, a, &x.arch)?;
            (
                9.0 * d * d * lip * lip * span * span / a.powf(2.0 / d),
                ln_optimization(x, p).exp(),
                generalization_term(x, p),
            )
        }
        Variant::CorMain => {
            check_c_at_least(
                x,
                &[("1", 1.0), ("2|u|", 2.0 * ua), ("2|v|", 2.0 * va), ("|a|", aa), ("|b|", ba), ("L", lip)],
            )?;
            check_io(x)?;
            let half = (p / 2.0).max(1.0);
            let ln_opt = std::f64::consts::LN_2
                + 0.5 * ((x.v - x.u) * depth * half).ln()
                + 0.5 * (depth * w1.ln() + (depth + 1.0) * c.ln())
                - k.ln() / (2.0 * depth * w1 * w1);
            (
                3.0 * d * lip * span / min_width(&x.arch, x.depth() - 1).powf(1.0 / d),
                ln_opt.exp(),
                (x.v - x.u).max(1.0)
                    * (10.0 * depth * w1.powf(1.5) * (p / 2.0).max((4.0 * m * x.beta * c).ln())).sqrt()
                    / m.powf(0.25),
            )
        }
    };
    Ok(BoundReport {
        schema_version: crate::SCHEMA_VERSION,
        variant,
        statistic: variant.statistic().into(),
        approximation: t1,
        optimization: t2,
        generalization: t3,
        total: t1 + t2 + t3,
        measured: None,
        inputs: x.clone(),
    })
}

/// `ln(4Mβc)` and `(3β/2) ln(eM)`; the first never exceeds the second.
pub fn log_lemma_check(c: f64, m: f64, beta: f64) -> Result<(f64, f64)> {
    require(c >= 1.0, || format!("c >= 1 (c = {c})"))?;
    require(m >= 1.0, || format!("M >= 1 (M = {m})"))?;
    require(beta >= c, || format!("β >= c (β = {beta}, c = {c})"))?;
    Ok(((4.0 * m * beta * c).ln(), 1.5 * beta * (std::f64::consts::E * m).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(dims: &[usize]) -> BoundInputs {
        BoundInputs {
            d: dims[0],
            arch: Architecture::new(dims.to_vec()).unwrap(),
            m: 10_000,
            k: 100,
            p: 2.0,
            c: 2.0,
            beta: 2.0,
            u: 0.0,
            v: 1.0,
            lipschitz: 1.0,
            a: 0.0,
            b: 1.0,
            resolution: None,
        }
    }

    #[test]
    fn generalization_example() {
        // 𝐋 = 2, ||l||_∞ = 3
        let x = inputs(&[1, 3, 1]);
        let g = generalization_bound(&x).unwrap();
        let oracle = 0.8 * 160_000f64.ln();
        assert!((g - oracle).abs() < 1e-12);
        assert!((g - 9.586).abs() < 1e-3);
        let bad = BoundInputs { beta: 0.5, c: 0.5, ..x.clone() };
        assert!(matches!(generalization_bound(&bad), Err(Error::Hypothesis(_))));
        // M -> 4M halves the bound when p attains the max
        let big_p = BoundInputs { p: 100.0, ..x.clone() };
        let big_p4 = BoundInputs { m: 40_000, ..big_p.clone() };
        let ratio = generalization_bound(&big_p).unwrap() / generalization_bound(&big_p4).unwrap();
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn optimization_examples() {
        let x = BoundInputs { k: 1, c: 1.0, beta: 1.0, p: 1.0, ..inputs(&[1, 1]) };
        assert!((optimization_bound(&x).unwrap() - 8.0).abs() < 1e-12);
        for k in [16u64, 81, 10_000] {
            let y = BoundInputs { k, ..x.clone() };
            assert!((optimization_bound(&y).unwrap() - 8.0 / (k as f64).powf(0.25)).abs() < 1e-12);
        }
        let z = inputs(&[2, 5, 4, 1]);
        assert!(optimization_bound(&BoundInputs { k: 1000, ..z.clone() }).unwrap() < optimization_bound(&z).unwrap());
    }

    #[test]
    fn intro_example_terms() {
        let x = inputs(&[1, 3, 1]);
        let r = overall_bound(&x, Variant::Intro).unwrap();
        assert!((r.approximation - 4.0).abs() < 1e-12);
        let t2 = 2.0 * 16.0 * 8.0 / 100f64.powf(1.0 / 64.0);
        assert!((r.optimization - t2).abs() < 1e-10 * t2);
        let t3 = 4.0 * 2.0 * 2.0 * 4.0 * (std::f64::consts::E * 1e4).ln() / 10.0;
        assert!((r.generalization - t3).abs() < 1e-12 * t3);
        assert_eq!(r.total, r.approximation + r.optimization + r.generalization);
    }

    #[test]
    fn simple_variants_agree() {
        let x = inputs(&[2, 6, 6, 1]);
        let a = overall_bound(&x, Variant::CorSimple).unwrap();
        let b = overall_bound(&x, Variant::CorSgdSimple).unwrap();
        assert_eq!((a.approximation, a.optimization, a.generalization), (b.approximation, b.optimization, b.generalization));
    }

    #[test]
    fn per_clause_rejections() {
        let x = BoundInputs { resolution: Some(2.0), ..inputs(&[1, 4, 1]) };
        overall_bound(&x, Variant::Theo1d).unwrap();
        let steep = BoundInputs { lipschitz: 1.5, ..x.clone() };
        let err = overall_bound(&steep, Variant::Theo1d).unwrap_err().to_string();
        assert!(err.contains("2L"), "{err}");
        let wide = BoundInputs { resolution: Some(3.0), ..x.clone() };
        assert!(overall_bound(&wide, Variant::Theo1d).unwrap_err().to_string().contains("A + 2"));
        let low_beta = BoundInputs { beta: 1.5, ..x.clone() };
        assert!(overall_bound(&low_beta, Variant::Theo1d).unwrap_err().to_string().contains("β >= c"));
        let shallow = BoundInputs { arch: Architecture::new(vec![1, 1]).unwrap(), ..x.clone() };
        assert!(overall_bound(&shallow, Variant::Theo1d).is_err());

        let y = inputs(&[1, 3, 1]);
        let big_u = BoundInputs { u: -1.5, ..y.clone() };
        assert!(overall_bound(&big_u, Variant::Cor1d).unwrap_err().to_string().contains("2|u|"));
        assert!(overall_bound(&inputs(&[1, 2, 1]), Variant::Cor1d).unwrap_err().to_string().contains("ℓ >= 3"));
        let c1 = BoundInputs { c: 1.5, beta: 1.5, ..y.clone() };
        assert!(overall_bound(&c1, Variant::Intro).unwrap_err().to_string().contains("c >= 2"));
        let beta3 = BoundInputs { beta: 3.0, ..y.clone() };
        assert!(overall_bound(&beta3, Variant::Intro).is_err());
        let wrong_d = BoundInputs { d: 2, ..y.clone() };
        assert!(overall_bound(&wrong_d, Variant::CorMain).unwrap_err().to_string().contains("l_0 = d"));

        let main = BoundInputs { resolution: Some(7.0), ..inputs(&[1, 7, 6, 3, 1]) };
        overall_bound(&main, Variant::TheoMain).unwrap();
        let narrow = BoundInputs { arch: Architecture::new(vec![1, 6, 6, 3, 1]).unwrap(), ..main.clone() };
        assert!(overall_bound(&narrow, Variant::TheoMain).is_err());
        let big_l = BoundInputs { lipschitz: 2.5, ..main };
        assert!(overall_bound(&big_l, Variant::TheoMain).unwrap_err().to_string().contains("c >= L"));
    }

    #[test]
    fn log_lemma_examples() {
        let (l, r) = log_lemma_check(1.0, 1.0, 1.0).unwrap();
        assert!((l - 4f64.ln()).abs() < 1e-15 && r == 1.5 && l <= r);
        let (l, r) = log_lemma_check(2.0, 10.0, 2.0).unwrap();
        assert!((l - 160f64.ln()).abs() < 1e-12 && (r - 3.0 * (10.0 * std::f64::consts::E).ln()).abs() < 1e-12);
        let (l, r) = log_lemma_check(2.0, 1e12, 3.0).unwrap();
        assert!(l / r < 1.0);
        assert!(log_lemma_check(2.0, 10.0, 1.0).is_err());
    }

    #[test]
    fn variant_names_roundtrip() {
        for v in Variant::ALL {
            assert_eq!(Variant::from_name(v.name()).unwrap(), v);
            assert_eq!(serde_json::to_string(&v).unwrap(), format!("\"{}\"", v.name()));
        }
    }
}
