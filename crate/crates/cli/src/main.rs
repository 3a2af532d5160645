//! Command-line front end: clustering ingestion, metric scoring, expectation
//! queries, generalizer-independence verification, and enumeration/sampling
//! utilities. Non-streaming commands print a single JSON report on standard
//! output; diagnostics go to standard error.
//!
//! Exit codes: 0 success; 2 parse/input errors; 3 degenerate-metric errors
//! (zero variance, vanished denominator); 4 a verification run whose
//! deviation exceeds tolerance (a measured failure, not a crash).

mod ingest;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use partition_metrics::{
    count_model, enumerate_model, expected_stat, free_morsel_report, sample_model,
    verify_generalizer_independence, Error as CoreError, Method, MetricName, MetricSpec,
    Normalization, PartitionShape, RandomModel, Scorer, Stat, TruthSelector, DEFAULT_ENUM_LIMIT,
};

use ingest::{read_clustering, FileFormat};
use report::{Inputs, Report, SCHEMA_VERSION};

#[derive(Parser)]
#[command(
    name = "partition-metrics",
    version,
    about = "Chance-adjusted clustering comparison over explicit random models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a predicted clustering against a ground truth.
    Score(ScoreArgs),
    /// Expected value (or variance) of a raw statistic under a model.
    Expectation(ExpectationArgs),
    /// Check that a metric's universe sums are independent of the truth.
    VerifyNfl(VerifyArgs),
    /// Stream every partition of a universe, one per line.
    Enumerate(EnumerateArgs),
    /// Stream seed-deterministic uniform samples, one per line.
    Sample(SampleArgs),
    /// Exact universe size, as a decimal string.
    Count(CountArgs),
    /// Boundary-versus-interior sums for AMI under a model, n = 3..=N.
    FreeMorsel(FreeMorselArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum MetricArg {
    Nmi,
    Ami,
    Ari,
    Rnmi,
    Rrnmi,
    Cnmi,
    Smi,
    Kappa,
}

impl From<MetricArg> for MetricName {
    fn from(m: MetricArg) -> MetricName {
        match m {
            MetricArg::Nmi => MetricName::Nmi,
            MetricArg::Ami => MetricName::Ami,
            MetricArg::Ari => MetricName::Ari,
            MetricArg::Rnmi => MetricName::Rnmi,
            MetricArg::Rrnmi => MetricName::Rrnmi,
            MetricArg::Cnmi => MetricName::Cnmi,
            MetricArg::Smi => MetricName::Smi,
            MetricArg::Kappa => MetricName::Kappa,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ModelArg {
    All,
    Perm,
    Num,
    Interior,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum NormArg {
    ConstantLogn,
    MaxEntropy,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Normalization {
        match n {
            NormArg::ConstantLogn => Normalization::ConstantLogN,
            NormArg::MaxEntropy => Normalization::MaxEntropy,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum StatArg {
    Mi,
    Nmi,
    Ri,
}

impl From<StatArg> for Stat {
    fn from(s: StatArg) -> Stat {
        match s {
            StatArg::Mi => Stat::MutualInformation,
            StatArg::Nmi => Stat::Nmi,
            StatArg::Ri => Stat::RandIndex,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum MethodArg {
    Exact,
    Mc,
}

#[derive(Args)]
struct ModelFlags {
    /// Random model family; inferred from --shape/--blocks when omitted,
    /// defaulting to `all`.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Block sizes for the fixed-shape model, comma separated (e.g. 3,2,2).
    /// When omitted under `--model perm`, the truth's shape is used.
    #[arg(long)]
    shape: Option<String>,
    /// Block count for the fixed-block-count model.
    #[arg(long)]
    blocks: Option<usize>,
}

impl ModelFlags {
    fn build(&self) -> Result<RandomModel, CliError> {
        let family = match (self.model, &self.shape, self.blocks) {
            (Some(m), _, _) => m,
            (None, Some(_), None) => ModelArg::Perm,
            (None, None, Some(_)) => ModelArg::Num,
            (None, None, None) => ModelArg::All,
            (None, Some(_), Some(_)) => {
                return Err(CliError::input(
                    "--shape and --blocks are mutually exclusive",
                ))
            }
        };
        match family {
            ModelArg::All | ModelArg::Interior => {
                if self.shape.is_some() || self.blocks.is_some() {
                    return Err(CliError::input(
                        "--shape/--blocks only apply to the perm and num models",
                    ));
                }
                Ok(match family {
                    ModelArg::All => RandomModel::All,
                    _ => RandomModel::Interior,
                })
            }
            ModelArg::Perm => {
                if self.blocks.is_some() {
                    return Err(CliError::input("--blocks does not apply to the perm model"));
                }
                let shape = match &self.shape {
                    None => None,
                    Some(text) => Some(parse_shape(text)?),
                };
                Ok(RandomModel::Perm { shape })
            }
            ModelArg::Num => {
                if self.shape.is_some() {
                    return Err(CliError::input("--shape does not apply to the num model"));
                }
                let blocks = self
                    .blocks
                    .ok_or_else(|| CliError::input("the num model needs --blocks"))?;
                Ok(RandomModel::Num { blocks })
            }
        }
    }
}

fn parse_shape(text: &str) -> Result<PartitionShape, CliError> {
    let sizes: Result<Vec<usize>, _> = text.split(',').map(|s| s.trim().parse()).collect();
    let sizes = sizes.map_err(|_| CliError::input(format!("invalid shape {text:?}")))?;
    PartitionShape::from_sizes(sizes).map_err(CliError::from)
}

#[derive(Args)]
struct MethodFlags {
    /// Estimation method for expectations.
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Seed for Monte Carlo sampling and truth sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on full-universe enumeration.
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    enum_limit: usize,
}

impl MethodFlags {
    fn build(&self) -> Method {
        match self.method {
            MethodArg::Exact => Method::Exact {
                enum_limit: self.enum_limit,
            },
            MethodArg::Mc => Method::MonteCarlo {
                samples: self.samples,
                seed: self.seed,
            },
        }
    }

    fn seed_echo(&self) -> Option<u64> {
        match self.method {
            MethodArg::Exact => None,
            MethodArg::Mc => Some(self.seed),
        }
    }
}

#[derive(Args)]
struct ScoreArgs {
    /// Predicted clustering file.
    pred: PathBuf,
    /// Ground-truth clustering file.
    truth: PathBuf,
    #[arg(long, value_enum)]
    metric: MetricArg,
    #[command(flatten)]
    model: ModelFlags,
    /// Normalization for the AMI family (and NMI).
    #[arg(long, value_enum, default_value = "constant-logn")]
    norm: NormArg,
    #[command(flatten)]
    method: MethodFlags,
    /// Input file format.
    #[arg(long, value_enum, default_value = "labels")]
    format: FileFormat,
}

#[derive(Args)]
struct ExpectationArgs {
    /// Ground-truth clustering file.
    truth: PathBuf,
    /// Statistic to average.
    #[arg(long, value_enum)]
    stat: StatArg,
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    method: MethodFlags,
    /// Report the variance instead of the mean.
    #[arg(long)]
    variance: bool,
    #[arg(long, value_enum, default_value = "labels")]
    format: FileFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of elements.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "ami")]
    metric: MetricArg,
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long, value_enum, default_value = "constant-logn")]
    norm: NormArg,
    /// Truth selection: all, sample:K, or boundary+sample:K.
    #[arg(long, default_value = "all")]
    truths: String,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[command(flatten)]
    method: MethodFlags,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    enum_limit: usize,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    model: ModelFlags,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    model: ModelFlags,
}

#[derive(Args)]
struct FreeMorselArgs {
    /// Largest element count; the report covers n = 3..=N.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "constant-logn")]
    norm: NormArg,
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    enum_limit: usize,
}

struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::DegenerateDenominator { .. } | CoreError::ZeroVariance => 3,
            _ => 2,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match dispatch(cli, started) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli, started: Instant) -> Result<i32, CliError> {
    match cli.command {
        Command::Score(args) => cmd_score(args, started),
        Command::Expectation(args) => cmd_expectation(args, started),
        Command::VerifyNfl(args) => cmd_verify_nfl(args, started),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Count(args) => cmd_count(args, started),
        Command::FreeMorsel(args) => cmd_free_morsel(args, started),
    }
}

fn timing_ms(started: Instant) -> f64 {
    started.elapsed().as_secs_f64() * 1e3
}

/// A closed downstream pipe is a normal way for a consumer to stop a stream.
fn ignore_broken_pipe(e: std::io::Error) -> Result<(), CliError> {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        Ok(())
    } else {
        Err(CliError::input(e.to_string()))
    }
}

fn stream_stop(e: std::io::Error) -> Result<i32, CliError> {
    ignore_broken_pipe(e).map(|()| 0)
}

fn cmd_score(args: ScoreArgs, started: Instant) -> Result<i32, CliError> {
    let pred = read_clustering(&args.pred, args.format).map_err(CliError::input)?;
    let truth = read_clustering(&args.truth, args.format).map_err(CliError::input)?;
    let spec = MetricSpec {
        name: args.metric.into(),
        model: args.model.build()?,
        normalization: args.norm.into(),
        method: args.method.build(),
    };
    let scorer = Scorer::new();
    let score = scorer.score(&spec, &pred, &truth)?;
    Report {
        schema_version: SCHEMA_VERSION,
        command: "score",
        inputs: Inputs {
            pred: Some(args.pred.display().to_string()),
            truth: Some(args.truth.display().to_string()),
            n: Some(truth.n()),
        },
        spec,
        result: score,
        seed: args.method.seed_echo(),
        timing_ms: timing_ms(started),
    }
    .print()
    .or_else(ignore_broken_pipe)?;
    Ok(0)
}

#[derive(Serialize)]
struct ExpectationSpec {
    stat: Stat,
    model: RandomModel,
    method: Method,
    variance: bool,
}

fn cmd_expectation(args: ExpectationArgs, started: Instant) -> Result<i32, CliError> {
    let truth = read_clustering(&args.truth, args.format).map_err(CliError::input)?;
    let model = args.model.build()?;
    let method = args.method.build();
    let stat: Stat = args.stat.into();
    let estimate = if args.variance {
        partition_metrics::variance_stat(stat, &truth, &model, &method)?
    } else {
        expected_stat(stat, &truth, &model, &method)?
    };
    Report {
        schema_version: SCHEMA_VERSION,
        command: "expectation",
        inputs: Inputs {
            pred: None,
            truth: Some(args.truth.display().to_string()),
            n: Some(truth.n()),
        },
        spec: ExpectationSpec {
            stat,
            model,
            method,
            variance: args.variance,
        },
        result: estimate,
        seed: args.method.seed_echo(),
        timing_ms: timing_ms(started),
    }
    .print()
    .or_else(ignore_broken_pipe)?;
    Ok(0)
}

fn parse_truths(text: &str, seed: u64) -> Result<TruthSelector, CliError> {
    if text == "all" {
        return Ok(TruthSelector::All);
    }
    if let Some(count) = text.strip_prefix("sample:") {
        let count = count
            .parse()
            .map_err(|_| CliError::input(format!("invalid truth selector {text:?}")))?;
        return Ok(TruthSelector::Sampled { count, seed });
    }
    if let Some(count) = text.strip_prefix("boundary+sample:") {
        let count = count
            .parse()
            .map_err(|_| CliError::input(format!("invalid truth selector {text:?}")))?;
        return Ok(TruthSelector::BoundaryPlusSampled { count, seed });
    }
    Err(CliError::input(format!(
        "invalid truth selector {text:?}; expected all, sample:K, or boundary+sample:K"
    )))
}

fn cmd_verify_nfl(args: VerifyArgs, started: Instant) -> Result<i32, CliError> {
    let spec = MetricSpec {
        name: args.metric.into(),
        model: args.model.build()?,
        normalization: args.norm.into(),
        method: args.method.build(),
    };
    let truths = parse_truths(&args.truths, args.method.seed)?;
    let scorer = Scorer::new();
    let nfl = verify_generalizer_independence(&scorer, &spec, args.n, &truths, args.tolerance)?;
    let passes = nfl.passes;
    Report {
        schema_version: SCHEMA_VERSION,
        command: "verify-nfl",
        inputs: Inputs {
            pred: None,
            truth: None,
            n: Some(args.n),
        },
        spec,
        result: nfl,
        seed: Some(args.method.seed),
        timing_ms: timing_ms(started),
    }
    .print()
    .or_else(ignore_broken_pipe)?;
    Ok(if passes { 0 } else { 4 })
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<i32, CliError> {
    let model = args.model.build()?;
    let resolved = resolve_standalone(&model)?;
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    for p in enumerate_model(&resolved, args.n, args.enum_limit)? {
        if let Err(e) = writeln!(out, "{p}") {
            return stream_stop(e);
        }
    }
    if let Err(e) = out.flush() {
        return stream_stop(e);
    }
    Ok(0)
}

fn cmd_sample(args: SampleArgs) -> Result<i32, CliError> {
    let model = args.model.build()?;
    let resolved = resolve_standalone(&model)?;
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    for p in sample_model(&resolved, args.n, args.seed, args.count)? {
        if let Err(e) = writeln!(out, "{p}") {
            return stream_stop(e);
        }
    }
    if let Err(e) = out.flush() {
        return stream_stop(e);
    }
    Ok(0)
}

#[derive(Serialize)]
struct CountResult {
    count: String,
}

#[derive(Serialize)]
struct UniverseSpec {
    model: RandomModel,
}

fn cmd_count(args: CountArgs, started: Instant) -> Result<i32, CliError> {
    let model = args.model.build()?;
    let resolved = resolve_standalone(&model)?;
    let count = count_model(&resolved, args.n)?;
    Report {
        schema_version: SCHEMA_VERSION,
        command: "count",
        inputs: Inputs {
            pred: None,
            truth: None,
            n: Some(args.n),
        },
        spec: UniverseSpec { model },
        result: CountResult {
            count: count.to_string(),
        },
        seed: None,
        timing_ms: timing_ms(started),
    }
    .print()
    .or_else(ignore_broken_pipe)?;
    Ok(0)
}

#[derive(Serialize)]
struct FreeMorselSpec {
    model: RandomModel,
    normalization: Normalization,
    enum_limit: usize,
}

fn cmd_free_morsel(args: FreeMorselArgs, started: Instant) -> Result<i32, CliError> {
    let model = args.model.build()?;
    let normalization: Normalization = args.norm.into();
    let scorer = Scorer::new();
    let fm = free_morsel_report(&scorer, args.n, normalization, &model, args.enum_limit)?;
    Report {
        schema_version: SCHEMA_VERSION,
        command: "free-morsel",
        inputs: Inputs {
            pred: None,
            truth: None,
            n: Some(args.n),
        },
        spec: FreeMorselSpec {
            model,
            normalization,
            enum_limit: args.enum_limit,
        },
        result: fm,
        seed: None,
        timing_ms: timing_ms(started),
    }
    .print()
    .or_else(ignore_broken_pipe)?;
    Ok(0)
}

/// Enumerate/sample/count have no ground truth to derive a perm shape from,
/// so the shape must be explicit there.
fn resolve_standalone(model: &RandomModel) -> Result<partition_metrics::ResolvedModel, CliError> {
    match model {
        RandomModel::Perm { shape: None } => Err(CliError::input(
            "the perm model needs an explicit --shape for this command",
        )),
        RandomModel::Perm { shape: Some(s) } => {
            Ok(partition_metrics::ResolvedModel::Perm(s.clone()))
        }
        RandomModel::All => Ok(partition_metrics::ResolvedModel::All),
        RandomModel::Num { blocks } => Ok(partition_metrics::ResolvedModel::Num(*blocks)),
        RandomModel::Interior => Ok(partition_metrics::ResolvedModel::Interior),
    }
}
