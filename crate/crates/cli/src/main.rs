//! `reluapprox` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a hypothesis or parameter check fails,
//! 2 on I/O or parse errors.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use reluapprox::approx::{dense_axis, run_approx, ApproxConfig, ApproxMethod, HypercubeDomain};
use reluapprox::bounds::{overall_bound, BoundInputs, Variant};
use reluapprox::constructive::{interp1d_net, l1_norm_net, max_convolution_net, max_net, Interp1dSpec, MaxConvSpec};
use reluapprox::experiment::{run_experiment, ExperimentConfig};
use reluapprox::params::forward_batch;
use reluapprox::targets::{TargetFamily, TargetOracle};
use reluapprox::train::{empirical_risk, select_best, sgd_restarts, BatchKey, SampleSource, SyntheticSource, TrainConfig};
use reluapprox::{flatten, Architecture, ClipBounds, StructuredNetwork, SCHEMA_VERSION};

#[derive(Debug)]
enum Failure {
    Lib(reluapprox::Error),
    Io(String),
}

impl From<reluapprox::Error> for Failure {
    fn from(e: reluapprox::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Lib(e)
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(format!("json: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(format!("csv: {e}"))
    }
}

type Outcome = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "reluapprox", version, about = "ReLU network calculus, approximation, training and error bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, evaluate or inspect networks.
    #[command(subcommand)]
    Net(NetCommand),
    /// Approximate a built-in target with an explicit network.
    Approx(ApproxArgs),
    /// Run SGD with random restarts and select the best candidate.
    Train(TrainArgs),
    /// Evaluate an overall error bound.
    Bounds(BoundsArgs),
    /// Run the full pipeline over independent repetitions.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum NetCommand {
    /// Construct one of the explicit networks and write it as JSON.
    Build(NetBuildArgs),
    /// Evaluate a network at one input.
    Eval(NetEvalArgs),
    /// Print architecture, depth and parameter statistics.
    Info(NetInfoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum NetKind {
    /// `x -> ||x||_1`, needs `--dim`.
    L1Norm,
    /// `x -> max_i x_i`, needs `--dim`.
    Max,
    /// Maximum convolution, needs `--spec` with lipschitz, centers and values.
    MaxConv,
    /// 1-D interpolation, needs `--spec` with a, b, resolution and values.
    Interp1d,
}

#[derive(Args)]
struct NetBuildArgs {
    #[arg(long, value_enum)]
    kind: NetKind,
    #[arg(long)]
    dim: Option<usize>,
    /// JSON file with the construction inputs.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Write the flattened parameter vector instead of the layer list.
    #[arg(long)]
    flat: bool,
}

#[derive(Args)]
struct NetEvalArgs {
    /// Network JSON as written by `net build`.
    #[arg(long)]
    net: PathBuf,
    /// Comma-separated input vector.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    x: Vec<f64>,
    /// Clip the output to `[u, v]`.
    #[arg(long, num_args = 2, value_names = ["U", "V"], allow_hyphen_values = true)]
    clip: Option<Vec<f64>>,
}

#[derive(Args)]
struct NetInfoArgs {
    #[arg(long)]
    net: PathBuf,
}

#[derive(Args)]
struct TargetArgs {
    /// Target family: abs-dist, l1-norm, sin-ridge or constant.
    #[arg(long, default_value = "abs-dist")]
    target: String,
    /// Lipschitz constant; rescales abs-dist and sin-ridge.
    #[arg(long = "lipschitz", short = 'L')]
    lipschitz: Option<f64>,
    /// Center of abs-dist.
    #[arg(long, allow_hyphen_values = true)]
    center: Option<f64>,
    /// Frequency of sin-ridge.
    #[arg(long)]
    freq: Option<f64>,
    /// Offset of sin-ridge or value of constant.
    #[arg(long, allow_hyphen_values = true)]
    offset: Option<f64>,
}

impl TargetArgs {
    fn family(&self) -> Result<TargetFamily, Failure> {
        let mut fam = TargetFamily::from_name(&self.target)?;
        let bad = |m: String| Failure::Lib(reluapprox::Error::InvalidParameter(m));
        match &mut fam {
            TargetFamily::AbsDist { center, scale } => {
                *center = self.center.unwrap_or(*center);
                *scale = self.lipschitz.unwrap_or(*scale);
            }
            TargetFamily::SinRidge { freq, scale, offset } => {
                *freq = self.freq.unwrap_or(*freq);
                *scale = self.lipschitz.unwrap_or(*scale);
                *offset = self.offset.unwrap_or(*offset);
            }
            TargetFamily::L1Norm => {
                if self.lipschitz.is_some_and(|l| l != 1.0) {
                    return Err(bad("l1-norm has Lipschitz constant 1".into()));
                }
            }
            TargetFamily::Constant { value } => {
                if self.lipschitz.is_some_and(|l| l != 0.0) {
                    return Err(bad("constant has Lipschitz constant 0".into()));
                }
                *value = self.offset.unwrap_or(*value);
            }
        }
        fam.validate()?;
        Ok(fam)
    }
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long, short, default_value_t = 1)]
    d: usize,
    #[arg(long, short, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, short, default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,
    #[command(flatten)]
    target: TargetArgs,
    /// Resolution `A`.
    #[arg(long = "resolution", short = 'A', conflicts_with = "epsilon", required_unless_present = "epsilon")]
    resolution: Option<f64>,
    /// Target accuracy; picks `A` and the architecture.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Architecture as comma-separated widths; defaults to the smallest admissible one.
    #[arg(long, value_delimiter = ',')]
    arch: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "max-convolution")]
    method: MethodArg,
    /// Points per axis of the grid used to estimate the sup error.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// JSON report; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Parameter vector of the built network.
    #[arg(long)]
    params_out: Option<PathBuf>,
    /// Table of `x, f(x), net(x)` on the grid, for `d <= 2`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    MaxConvolution,
    Interp1d,
}

#[derive(Args)]
struct TrainArgs {
    /// JSON config: d, a, b, target, samples, noise and the training fields under `train`.
    config: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Also write every stored parameter snapshot.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Intro,
    Theo1d,
    Cor1d,
    TheoMain,
    CorMain,
    CorSimple,
    CorSgdSimple,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Intro => Variant::Intro,
            VariantArg::Theo1d => Variant::Theo1d,
            VariantArg::Cor1d => Variant::Cor1d,
            VariantArg::TheoMain => Variant::TheoMain,
            VariantArg::CorMain => Variant::CorMain,
            VariantArg::CorSimple => Variant::CorSimple,
            VariantArg::CorSgdSimple => Variant::CorSgdSimple,
        }
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(long, short, default_value_t = 1)]
    d: usize,
    /// Architecture as comma-separated widths.
    #[arg(long, value_delimiter = ',', required = true)]
    arch: Vec<usize>,
    /// Number of samples `M`.
    #[arg(long, short = 'M')]
    samples: u64,
    /// Number of restarts `K`.
    #[arg(long, short = 'K')]
    restarts: u64,
    #[arg(long, short, default_value_t = 1.0)]
    p: f64,
    /// Initialization radius.
    #[arg(long, short)]
    c: f64,
    /// Selection radius; defaults to `c`.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    u: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    v: f64,
    #[arg(long = "lipschitz", short = 'L', default_value_t = 1.0)]
    lipschitz: f64,
    #[arg(long, short, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, short, default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,
    /// Resolution `A` for the theorem forms.
    #[arg(long = "resolution", short = 'A')]
    resolution: Option<f64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    config: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Per-repetition table.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Training run read by `train`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrainRun {
    d: usize,
    a: f64,
    b: f64,
    target: TargetFamily,
    /// Validation sample size `M`.
    samples: usize,
    #[serde(default)]
    noise: f64,
    train: TrainConfig,
}

#[derive(Serialize)]
struct RestartSummary {
    k: usize,
    init_seed: u64,
    final_step: usize,
    final_risk: f64,
    final_sup_norm: f64,
}

#[derive(Serialize)]
struct TrainReport {
    schema_version: u32,
    arch: Architecture,
    validation_samples: usize,
    restarts: Vec<RestartSummary>,
    selection: reluapprox::train::SelectionResult,
}

#[derive(Serialize)]
struct NetInfo {
    arch: Architecture,
    depth: usize,
    hidden_layers: usize,
    param_count: usize,
    max_width: usize,
    max_abs_param: f64,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Outcome {
    emit(&serde_json::to_string_pretty(value)?, out)
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Lib(reluapprox::Error::InvalidParameter(msg.into()))
}

fn net_build(args: &NetBuildArgs) -> Outcome {
    let need_dim = || args.dim.ok_or_else(|| invalid("--dim is required for this kind"));
    let need_spec = || -> Result<String, Failure> {
        let p = args.spec.as_ref().ok_or_else(|| invalid("--spec is required for this kind"))?;
        read(p)
    };
    let net = match args.kind {
        NetKind::L1Norm => l1_norm_net(need_dim()?)?,
        NetKind::Max => max_net(need_dim()?)?,
        NetKind::MaxConv => {
            let spec: MaxConvSpec = serde_json::from_str(&need_spec()?)?;
            max_convolution_net(&spec)?
        }
        NetKind::Interp1d => {
            let spec: Interp1dSpec = serde_json::from_str(&need_spec()?)?;
            interp1d_net(&spec)?
        }
    };
    let text = if args.flat { flatten(&net).to_json()? } else { net.to_json()? };
    emit(&text, args.out.as_deref())
}

fn net_eval(args: &NetEvalArgs) -> Outcome {
    let net = StructuredNetwork::from_json(&read(&args.net)?)?;
    let mut y = net.realize_relu(&args.x)?;
    if let Some(c) = &args.clip {
        let bounds = ClipBounds::new(c[0], c[1])?;
        y.iter_mut().for_each(|v| *v = bounds.clip(*v));
    }
    emit_json(&y, None)
}

fn net_info(args: &NetInfoArgs) -> Outcome {
    let net = StructuredNetwork::from_json(&read(&args.net)?)?;
    let arch = net.arch();
    emit_json(
        &NetInfo {
            depth: arch.depth(),
            hidden_layers: arch.hidden_layers(),
            param_count: arch.param_count(),
            max_width: arch.max_width(),
            max_abs_param: net.max_abs_param(),
            arch,
        },
        None,
    )
}

fn approx(args: &ApproxArgs) -> Outcome {
    let cfg = ApproxConfig {
        d: args.d,
        a: args.a,
        b: args.b,
        target: args.target.family()?,
        resolution: args.resolution,
        epsilon: args.epsilon,
        arch: args.arch.clone().map(Architecture::new).transpose()?,
        clip: None,
        points_per_axis: args.grid,
        method: match args.method {
            MethodArg::MaxConvolution => ApproxMethod::MaxConvolution,
            MethodArg::Interp1d => ApproxMethod::Interp1d,
        },
    };
    let (report, theta) = run_approx(&cfg)?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    if let Some(p) = &args.params_out {
        emit(&theta.to_json()?, Some(p))?;
    }
    if let Some(p) = &args.csv {
        write_approx_csv(p, &cfg, &theta, &report)?;
    }
    emit_json(&report, args.out.as_deref())
}

fn write_approx_csv(
    path: &Path,
    cfg: &ApproxConfig,
    theta: &reluapprox::ParamVector,
    report: &reluapprox::approx::ApproxReport,
) -> Outcome {
    if cfg.d > 2 {
        return Err(invalid("the CSV table is only available for d <= 2"));
    }
    let dom = HypercubeDomain::new(cfg.a, cfg.b, cfg.d)?;
    let f = cfg.target.on(dom)?;
    let axis = dense_axis(&dom, cfg.points_per_axis);
    let xs: Vec<Vec<f64>> = if cfg.d == 1 {
        axis.iter().map(|x| vec![*x]).collect()
    } else {
        axis.iter().flat_map(|x| axis.iter().map(move |y| vec![*x, *y])).collect()
    };
    let ys = forward_batch(theta.theta(), theta.arch(), report.clip, &xs.concat())?;
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=cfg.d).map(|i| format!("x{i}")).collect();
    header.extend(["f".into(), "net".into()]);
    w.write_record(&header)?;
    for (x, y) in xs.iter().zip(ys) {
        let mut row: Vec<String> = x.iter().map(f64::to_string).collect();
        row.push(f.eval(x).to_string());
        row.push(y.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn train(args: &TrainArgs) -> Outcome {
    let run: TrainRun = serde_json::from_str(&read(&args.config)?)?;
    let dom = HypercubeDomain::new(run.a, run.b, run.d)?;
    let f = run.target.on(dom)?;
    let mut source = SyntheticSource::new(f, dom, run.train.clip, run.noise, run.train.seed)?;
    let validation = source.batch(BatchKey::VALIDATION, run.samples)?;
    let table = sgd_restarts(&run.train, &mut source)?;
    let selection = select_best(&table, &run.train, &validation)?;
    let mut restarts = Vec::with_capacity(table.restarts.len());
    for r in &table.restarts {
        let last = r.snapshots.last().ok_or_else(|| invalid("restart stored no snapshots"))?;
        restarts.push(RestartSummary {
            k: r.k,
            init_seed: r.init_seed,
            final_step: last.n,
            final_risk: empirical_risk(&last.theta, &table.arch, run.train.clip, &validation)?,
            final_sup_norm: last.theta.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        });
    }
    if let Some(p) = &args.table {
        emit_json(&table, Some(p))?;
    }
    let report = TrainReport {
        schema_version: SCHEMA_VERSION,
        arch: table.arch.clone(),
        validation_samples: validation.len(),
        restarts,
        selection,
    };
    emit_json(&report, args.out.as_deref())
}

fn bounds(args: &BoundsArgs) -> Outcome {
    let inputs = BoundInputs {
        d: args.d,
        arch: Architecture::new(args.arch.clone())?,
        m: args.samples,
        k: args.restarts,
        p: args.p,
        c: args.c,
        beta: args.beta.unwrap_or(args.c),
        u: args.u,
        v: args.v,
        lipschitz: args.lipschitz,
        a: args.a,
        b: args.b,
        resolution: args.resolution,
    };
    let report = overall_bound(&inputs, args.variant.into())?;
    emit_json(&report, args.out.as_deref())
}

fn experiment(args: &ExperimentArgs) -> Outcome {
    let cfg: ExperimentConfig = serde_json::from_str(&read(&args.config)?)?;
    let report = run_experiment(&cfg)?;
    if let Some(p) = &args.csv {
        let mut w = csv::Writer::from_path(p)?;
        for r in &report.repetitions {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    emit(&report.to_json()?, args.out.as_deref())
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Net(NetCommand::Build(a)) => net_build(a),
        Command::Net(NetCommand::Eval(a)) => net_eval(a),
        Command::Net(NetCommand::Info(a)) => net_info(a),
        Command::Approx(a) => approx(a),
        Command::Train(a) => train(a),
        Command::Bounds(a) => bounds(a),
        Command::Experiment(a) => experiment(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
