//! End-to-end experiment: sample, train with restarts, select, measure the
//! error by Monte Carlo, repeat `R` times and compare with a bound.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::approx::HypercubeDomain;
use crate::bounds::{overall_bound, BoundInputs, BoundReport, Variant};
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::rng::{self, derive_seed};
use crate::targets::{TargetFamily, TargetOracle};
use crate::train::{error_estimates, mean_and_se, select_best, sgd_restarts, BatchKey, SampleSource, SyntheticSource, TrainConfig};

const STREAM_REPETITION: u64 = 10;
const STREAM_BOOTSTRAP: u64 = 11;

fn default_p() -> f64 {
    1.0
}

fn default_test_samples() -> usize {
    10_000
}

fn default_bootstrap() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub target: TargetFamily,
    /// Half-width of the symmetric label noise; 0 gives `Y = f(X)`.
    #[serde(default)]
    pub noise: f64,
    /// Training set size `M`, also the size of the selection set.
    pub samples: usize,
    /// `arch`, `K`, `N`, schedules, `c`, `β` and clip interval; its `seed` is
    /// replaced by a per-repetition seed.
    pub train: TrainConfig,
    /// `R`.
    pub repetitions: usize,
    /// Monte Carlo points per error estimate.
    #[serde(default = "default_test_samples")]
    pub test_samples: usize,
    pub variant: Variant,
    #[serde(default = "default_p")]
    pub p: f64,
    /// `A`, needed by the theorem forms.
    #[serde(default)]
    pub resolution: Option<f64>,
    #[serde(default = "default_bootstrap")]
    pub bootstrap_resamples: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn domain(&self) -> Result<HypercubeDomain> {
        HypercubeDomain::new(self.a, self.b, self.d)
    }

    /// Bound inputs implied by the configuration.
    pub fn bound_inputs(&self) -> Result<BoundInputs> {
        let f = self.target.on(self.domain()?)?;
        Ok(BoundInputs {
            d: self.d,
            arch: self.train.arch.clone(),
            m: self.samples as u64,
            k: self.train.restarts as u64,
            p: self.p,
            c: self.train.init_radius,
            beta: self.train.selection_radius,
            u: self.train.clip.u(),
            v: self.train.clip.v(),
            lipschitz: f.lipschitz(),
            a: self.a,
            b: self.b,
            resolution: self.resolution,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        if self.train.arch.input_dim() != self.d {
            return Err(Error::InvalidParameter(format!(
                "architecture {} does not take inputs of dimension {}",
                self.train.arch, self.d
            )));
        }
        if self.samples == 0 || self.repetitions == 0 || self.test_samples == 0 {
            return Err(Error::InvalidParameter("samples, repetitions and test_samples must be positive".into()));
        }
        if self.bootstrap_resamples == 0 {
            return Err(Error::InvalidParameter("bootstrap_resamples must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of one repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionResult {
    pub repetition: usize,
    pub seed: u64,
    pub k: usize,
    pub n: usize,
    pub empirical_risk: f64,
    pub eligible: usize,
    /// Estimate of `∫|N - f| dP`.
    pub l1_error: f64,
    pub l1_std_error: f64,
    /// Estimate of `∫|N - f|^2 dP`.
    pub l2sq_error: f64,
    pub l2sq_std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub mean_l1_error: f64,
    pub l1_std_error: f64,
    pub mean_l2sq_error: f64,
    pub l2sq_std_error: f64,
    /// Formula of the measured statistic.
    pub statistic: String,
    /// The statistic the bound controls, estimated over the repetitions.
    pub measured: f64,
    /// Bootstrap standard error of `measured` over repetitions.
    pub measured_std_error: f64,
    pub bootstrap_resamples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub repetitions: Vec<RepetitionResult>,
    pub summary: ExperimentSummary,
    pub bound: BoundReport,
    /// `bound / measured`.
    pub ratio: f64,
    pub bound_satisfied: bool,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// The statistic controlled by `variant` over repetitions with errors `(E1_r, E2_r)`.
pub fn variant_statistic(variant: Variant, p: f64, l1: &[f64], l2sq: &[f64]) -> f64 {
    let (vals, root): (Vec<f64>, f64) = match variant {
        Variant::Intro | Variant::CorSimple | Variant::CorSgdSimple => (l1.to_vec(), 1.0),
        Variant::Theo1d | Variant::TheoMain => (l2sq.iter().map(|e| e.powf(p)).collect(), 1.0 / p),
        Variant::Cor1d | Variant::CorMain => (l2sq.iter().map(|e| e.powf(p / 2.0)).collect(), 1.0 / p),
    };
    (pairwise_sum(&vals) / vals.len() as f64).powf(root)
}

fn bootstrap_se(variant: Variant, p: f64, l1: &[f64], l2sq: &[f64], resamples: usize, seed: u64) -> f64 {
    let r = l1.len();
    if r < 2 {
        return 0.0;
    }
    let mut rng = rng::stream(seed, &[STREAM_BOOTSTRAP]);
    let (mut b1, mut b2) = (vec![0.0; r], vec![0.0; r]);
    let stats: Vec<f64> = (0..resamples)
        .map(|_| {
            for i in 0..r {
                let j = rng.random_range(0..r);
                b1[i] = l1[j];
                b2[i] = l2sq[j];
            }
            variant_statistic(variant, p, &b1, &b2)
        })
        .collect();
    let (mean, _) = mean_and_se(&stats);
    let dev: Vec<f64> = stats.iter().map(|s| (s - mean) * (s - mean)).collect();
    (pairwise_sum(&dev) / (resamples.max(2) - 1) as f64).sqrt()
}

/// Runs one repetition with its own seed.
pub fn run_repetition(cfg: &ExperimentConfig, repetition: usize) -> Result<RepetitionResult> {
    let seed = derive_seed(cfg.seed, &[STREAM_REPETITION, repetition as u64]);
    let dom = cfg.domain()?;
    let target = cfg.target.on(dom)?;
    let train = TrainConfig {
        seed: derive_seed(seed, &[1]),
        ..cfg.train.clone()
    };
    let mut source = SyntheticSource::new(target.clone(), dom, train.clip, cfg.noise, derive_seed(seed, &[2]))?;
    let validation = source.batch(BatchKey::VALIDATION, cfg.samples)?;
    let table = sgd_restarts(&train, &mut source)?;
    let sel = select_best(&table, &train, &validation)?;
    let [e1, e2] = error_estimates(&sel.params, train.clip, &target, &dom, cfg.test_samples, &[1, 2], derive_seed(seed, &[3]))?;
    Ok(RepetitionResult {
        repetition,
        seed,
        k: sel.k,
        n: sel.n,
        empirical_risk: sel.risk,
        eligible: sel.eligible,
        l1_error: e1.mean,
        l1_std_error: e1.std_error,
        l2sq_error: e2.mean,
        l2sq_std_error: e2.std_error,
    })
}

/// Runs all repetitions in order and attaches the bound of `cfg.variant`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let inputs = cfg.bound_inputs()?;
    let mut bound = overall_bound(&inputs, cfg.variant)?;
    let repetitions = (1..=cfg.repetitions)
        .map(|r| {
            run_repetition(cfg, r).map_err(|e| Error::Repetition {
                index: r,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let l1: Vec<f64> = repetitions.iter().map(|r| r.l1_error).collect();
    let l2: Vec<f64> = repetitions.iter().map(|r| r.l2sq_error).collect();
    let (mean_l1, se_l1) = mean_and_se(&l1);
    let (mean_l2, se_l2) = mean_and_se(&l2);
    let measured = variant_statistic(cfg.variant, cfg.p, &l1, &l2);
    let measured_se = bootstrap_se(cfg.variant, cfg.p, &l1, &l2, cfg.bootstrap_resamples, cfg.seed);
    bound.measured = Some(measured);
    let mut notes = vec![format!(
        "errors are Monte Carlo estimates with {} points per repetition; measured_std_error is a bootstrap estimate over {} repetitions",
        cfg.test_samples, cfg.repetitions
    )];
    if cfg.p < 1.0 && !matches!(cfg.variant, Variant::Intro | Variant::CorSimple | Variant::CorSgdSimple) {
        notes.push(format!("p = {} < 1: the reported p-th moment root is not a norm", cfg.p));
    }
    Ok(ExperimentReport {
        schema_version: crate::SCHEMA_VERSION,
        config: cfg.clone(),
        summary: ExperimentSummary {
            mean_l1_error: mean_l1,
            l1_std_error: se_l1,
            mean_l2sq_error: mean_l2,
            l2sq_std_error: se_l2,
            statistic: cfg.variant.statistic().into(),
            measured,
            measured_std_error: measured_se,
            bootstrap_resamples: cfg.bootstrap_resamples,
        },
        ratio: bound.total / measured,
        bound_satisfied: measured <= bound.total,
        bound,
        repetitions,
        notes,
    })
}
