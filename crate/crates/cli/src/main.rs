//! `ramanujan`: decompose signals into exactly periodic components, compare
//! them by periodic similarity and run the robustness experiments.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const AFTER_HELP: &str = "\
Signal files are single-column CSV: one sample per line, an optional
non-numeric header line, blank lines ignored.

All period-indexed JSON arrays are 1-based: element i belongs to period i+1.

Exit codes: 0 success, 2 input or format error, 3 precondition violation,
4 internal invariant failure.

Parallel builds use all cores by default; set RAYON_NUM_THREADS to limit the
thread count. Results do not depend on it.";

#[derive(Parser)]
#[command(name = "ramanujan", version, about, after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a signal by subspace pursuit and write the result as JSON.
    Decompose(DecomposeArgs),
    /// Periodic similarity between two signals, with both histograms.
    Similarity(SimilarityArgs),
    /// Run the length or SNR robustness experiment.
    Experiment(ExperimentArgs),
    /// Print the Ramanujan sums, totient, divisors and projector trace of one period.
    InspectSubspace(InspectArgs),
    /// Write a test signal as single-column CSV.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Rsp,
    Frsp,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Exact,
    Approximate,
}

#[derive(Args)]
struct PursuitArgs {
    /// Largest candidate period Q; must not exceed the signal length.
    #[arg(short = 'Q', long, default_value_t = 60)]
    max_period: usize,
    /// Maximum number of pursuit iterations K.
    #[arg(short = 'K', long, default_value_t = 10)]
    iterations: usize,
    /// Stop once the residual energy falls to this fraction of the input energy.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Frsp)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum, default_value_t = MetricArg::Exact)]
    metric: MetricArg,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input signal (CSV).
    input: PathBuf,
    #[command(flatten)]
    pursuit: PursuitArgs,
    /// Write JSON here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Check that components plus residual reproduce the input (exit 4 if not).
    #[arg(long)]
    verify: bool,
    /// Include the samples of every component in the output.
    #[arg(long)]
    components: bool,
}

#[derive(Args)]
struct SimilarityArgs {
    /// First signal (CSV).
    a: PathBuf,
    /// Second signal (CSV).
    b: PathBuf,
    #[command(flatten)]
    pursuit: PursuitArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    /// Sweep the signal length; no noise.
    Length,
    /// Sweep the SNR in dB at a fixed length.
    Snr,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroundTruthArg {
    /// Split each generated component into its parts in S_d for every divisor d of its period.
    ExactlyPeriodic,
    /// Credit each generated component wholly to its generating period.
    NominalPeriod,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    protocol: ProtocolArg,
    /// Comma-separated lengths or SNRs in dB (`inf` for no noise).
    #[arg(
        long,
        required = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    grid: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Trial t uses seed `seed + t`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest candidate period; capped at the signal length per grid point.
    #[arg(short = 'Q', long, default_value_t = 120)]
    max_period: usize,
    #[arg(short = 'K', long, default_value_t = 10)]
    iterations: usize,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Frsp)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum, default_value_t = MetricArg::Exact)]
    metric: MetricArg,
    #[arg(long, value_enum, default_value_t = GroundTruthArg::ExactlyPeriodic)]
    ground_truth: GroundTruthArg,
    /// Signal length for the SNR protocol.
    #[arg(long, default_value_t = 500)]
    length: usize,
    /// Write the JSON report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write a CSV table of grid value, mean and std of the similarity.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(short = 'q', long)]
    period: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalKind {
    /// cos(2 pi n/17) + cos(2 pi n/36) + cos(2 pi n/45).
    ThreeCosine,
    /// Sum of random tiled blocks with periods in [1, 100].
    Mixture,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: SignalKind,
    #[arg(short = 'n', long)]
    length: usize,
    /// Number of mixture components.
    #[arg(long, default_value_t = 4)]
    num_components: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add white Gaussian noise at this SNR in dB.
    #[arg(long, allow_negative_numbers = true)]
    snr: Option<f64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(a) => commands::decompose(a),
        Command::Similarity(a) => commands::similarity(a),
        Command::Experiment(a) => commands::experiment(a),
        Command::InspectSubspace(a) => commands::inspect_subspace(a),
        Command::Generate(a) => commands::generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
