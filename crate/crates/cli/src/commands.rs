//! Subcommand bodies: input parsing, calls into the library and JSON output.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use ramanujan_pursuit::experiment::{run_experiment_with, GroundTruth};
use ramanujan_pursuit::{
    add_white_noise, build_basis, decompose as run_pursuit, divisors, energy_histogram,
    euler_totient, factorize, hellinger_distance, periodic_similarity, pes, random_mixture,
    three_cosine, Algorithm, Decomposition, Error, Execution, ExperimentConfig, MetricMode,
    PeriodicComponent, PeriodicEnergyHistogram, Protocol, PursuitConfig, Signal,
};
use serde::Serialize;

use crate::{
    AlgorithmArg, DecomposeArgs, ExperimentArgs, GenerateArgs, GroundTruthArg, InspectArgs,
    MetricArg, ProtocolArg, PursuitArgs, SignalKind, SimilarityArgs,
};

/// Largest relative reconstruction error accepted by `decompose --verify`.
const VERIFY_TOLERANCE: f64 = 1e-8;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    /// Valid input that violates a documented precondition.
    Precondition(String),
    /// A checked invariant did not hold.
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Precondition(m) | CliError::Invariant(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptySignal | Error::NonFiniteSample { .. } => CliError::Input(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

fn read_signal(path: &Path) -> CliResult<Signal> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut samples = Vec::new();
    let mut first = true;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => samples.push(v),
            Err(_) if first => {}
            Err(_) => {
                return Err(CliError::Input(format!(
                    "{}:{}: expected one number per line, found {line:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
        first = false;
    }
    Signal::new(samples).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&PathBuf>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Invariant(format!("cannot serialize output: {e}")))
}

fn algorithm(a: AlgorithmArg) -> Algorithm {
    match a {
        AlgorithmArg::Rsp => Algorithm::Rsp,
        AlgorithmArg::Frsp => Algorithm::Frsp,
    }
}

fn metric_mode(m: MetricArg) -> MetricMode {
    match m {
        MetricArg::Exact => MetricMode::Exact,
        MetricArg::Approximate => MetricMode::Approximate,
    }
}

fn pursuit_config(p: &PursuitArgs) -> PursuitConfig {
    PursuitConfig::new(p.max_period)
        .with_iterations(p.iterations)
        .with_tolerance(p.tolerance)
        .with_metric_mode(metric_mode(p.metric))
}

fn run(x: &Signal, p: &PursuitArgs) -> CliResult<Decomposition> {
    if p.max_period > x.len() {
        return Err(CliError::Precondition(format!(
            "max period {} exceeds the signal length {}; pass --max-period at most {}",
            p.max_period,
            x.len(),
            x.len()
        )));
    }
    Ok(run_pursuit(x, &pursuit_config(p), algorithm(p.algorithm))?)
}

#[derive(Serialize)]
struct ComponentReport<'a> {
    period: usize,
    energy: f64,
    metric: f64,
    iteration: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<&'a [f64]>,
}

#[derive(Serialize)]
struct VerifyReport {
    max_abs_error: f64,
    relative_error: f64,
    tolerance: f64,
}

#[derive(Serialize)]
struct DecomposeReport<'a> {
    version: &'static str,
    input: String,
    length: usize,
    config: PursuitConfig,
    algorithm: Algorithm,
    periods: Vec<usize>,
    components: Vec<ComponentReport<'a>>,
    input_energy: f64,
    residual_energy_trace: &'a [f64],
    relative_residual_energy: f64,
    energy_defects: &'a [f64],
    /// Entry i is the energy of the merged period-(i+1) component.
    pes: Vec<f64>,
    representation_condition_met: bool,
    degenerate_stop: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<VerifyReport>,
}

fn component(c: &PeriodicComponent, with_samples: bool) -> ComponentReport<'_> {
    ComponentReport {
        period: c.period,
        energy: c.energy,
        metric: c.metric,
        iteration: c.iteration,
        samples: with_samples.then_some(c.samples.as_slice()),
    }
}

fn verify(x: &Signal, d: &Decomposition) -> CliResult<VerifyReport> {
    let rebuilt = d.reconstruct();
    let mut max_abs = 0.0f64;
    let mut err2 = 0.0;
    for (a, b) in x.samples().iter().zip(&rebuilt) {
        max_abs = max_abs.max((a - b).abs());
        err2 += (a - b) * (a - b);
    }
    let relative = if x.energy() > 0.0 {
        (err2 / x.energy()).sqrt()
    } else {
        err2.sqrt()
    };
    if relative.is_nan() || relative > VERIFY_TOLERANCE {
        return Err(CliError::Invariant(format!(
            "components plus residual miss the input by {relative:e} relative (limit {VERIFY_TOLERANCE:e})"
        )));
    }
    Ok(VerifyReport {
        max_abs_error: max_abs,
        relative_error: relative,
        tolerance: VERIFY_TOLERANCE,
    })
}

pub fn decompose(args: DecomposeArgs) -> CliResult {
    let x = read_signal(&args.input)?;
    let d = run(&x, &args.pursuit)?;
    let verified = if args.verify {
        Some(verify(&x, &d)?)
    } else {
        None
    };
    let spectrum = pes(&d, args.pursuit.max_period)?;
    let report = DecomposeReport {
        version: env!("CARGO_PKG_VERSION"),
        input: args.input.display().to_string(),
        length: x.len(),
        config: pursuit_config(&args.pursuit),
        algorithm: d.algorithm,
        periods: d.periods(),
        components: d
            .components
            .iter()
            .map(|c| component(c, args.components))
            .collect(),
        input_energy: d.input_energy,
        residual_energy_trace: &d.residual_energy_trace,
        relative_residual_energy: d.relative_residual_energy(),
        energy_defects: &d.energy_defects,
        pes: spectrum.energies,
        representation_condition_met: d.representation_condition_met,
        degenerate_stop: d.degenerate_stop,
        verify: verified,
    };
    write_output(args.output.as_ref(), &to_json(&report)?)
}

#[derive(Serialize)]
struct SimilarityReport {
    version: &'static str,
    max_period: usize,
    similarity: f64,
    hellinger_distance: f64,
    /// Entry i is ||x_(i+1)|| / ||x||.
    histogram_a: Vec<f64>,
    histogram_b: Vec<f64>,
}

fn histogram(path: &Path, p: &PursuitArgs) -> CliResult<PeriodicEnergyHistogram> {
    let x = read_signal(path)?;
    if x.energy() == 0.0 {
        return Err(CliError::Precondition(format!(
            "{} has zero energy; its periodic histogram is undefined",
            path.display()
        )));
    }
    let d = run(&x, p)?;
    Ok(energy_histogram(&d, p.max_period)?)
}

pub fn similarity(args: SimilarityArgs) -> CliResult {
    let a = histogram(&args.a, &args.pursuit)?;
    let b = histogram(&args.b, &args.pursuit)?;
    let report = SimilarityReport {
        version: env!("CARGO_PKG_VERSION"),
        max_period: args.pursuit.max_period,
        similarity: periodic_similarity(&a, &b)?,
        hellinger_distance: hellinger_distance(&a, &b)?,
        histogram_a: a.values,
        histogram_b: b.values,
    };
    write_output(None, &to_json(&report)?)
}

pub fn experiment(args: ExperimentArgs) -> CliResult {
    let protocol = match args.protocol {
        ProtocolArg::Length => Protocol::Length,
        ProtocolArg::Snr => Protocol::Snr,
    };
    let mut cfg = ExperimentConfig::new(protocol, args.grid);
    cfg.trials = args.trials;
    cfg.base_seed = args.seed;
    cfg.max_period = args.max_period;
    cfg.max_iterations = args.iterations;
    cfg.residual_tolerance = args.tolerance;
    cfg.algorithm = algorithm(args.algorithm);
    cfg.metric_mode = metric_mode(args.metric);
    cfg.snr_length = args.length;
    cfg.ground_truth = match args.ground_truth {
        GroundTruthArg::ExactlyPeriodic => GroundTruth::ExactlyPeriodic,
        GroundTruthArg::NominalPeriod => GroundTruth::NominalPeriod,
    };
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let report = run_experiment_with(&cfg, exec)?;
    if let Some(path) = &args.table {
        write_output(Some(path), &report.table_csv())?;
    }
    write_output(args.output.as_ref(), &to_json(&report)?)
}

#[derive(Serialize)]
struct SubspaceReport {
    period: usize,
    /// c_q(n) for n = 0..q.
    ramanujan_sums: Vec<i64>,
    totient: usize,
    divisors: Vec<usize>,
    /// (prime, exponent) pairs.
    factorization: Vec<(usize, u32)>,
    /// Trace of the projector onto S_q; equals the subspace dimension.
    projector_trace: f64,
}

pub fn inspect_subspace(args: InspectArgs) -> CliResult {
    let q = args.period;
    let basis = build_basis(q)?;
    let report = SubspaceReport {
        period: q,
        ramanujan_sums: basis.sums().values().to_vec(),
        totient: euler_totient(q)?,
        divisors: divisors(q)?,
        factorization: factorize(q)?.factors().to_vec(),
        projector_trace: basis.projector_trace(),
    };
    write_output(None, &to_json(&report)?)
}

pub fn generate(args: GenerateArgs) -> CliResult {
    let x = match args.kind {
        SignalKind::ThreeCosine => three_cosine(args.length)?,
        SignalKind::Mixture => {
            random_mixture(args.num_components, (1, 100), args.length, args.seed)?.0
        }
    };
    let x = match args.snr {
        Some(snr) => add_white_noise(&x, snr, args.seed)?,
        None => x,
    };
    let mut text = String::with_capacity(x.len() * 24);
    for v in x.samples() {
        text.push_str(&format!("{v:e}\n"));
    }
    write_output(args.output.as_ref(), &text)
}
