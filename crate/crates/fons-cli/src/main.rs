//! Command-line front end for the prediction toolkit.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 numerical error, 4 equivalence gate failure.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fons::harness::{
    bench_sweep, compare_samples, run_samples, scale_minmax, Algorithm, ColumnSelector,
    HarnessError, Precision, SourceError, StreamSource, SynthSpec,
};
use fons::params::ParamError;
use fons::HyperParams;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_GATE: u8 = 4;

/// Streaming linear prediction over sliding sample windows.
#[derive(Debug, Parser)]
#[command(name = "fons", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one learner over a stream and write its metrics.
    Run(RunArgs),
    /// Run fast and regular Newton learners in lockstep and gate on their
    /// worst-case deviation.
    Compare(CompareArgs),
    /// Time every (algorithm, dimension) cell and fit scaling exponents.
    Bench(BenchArgs),
    /// Generate a synthetic AR sample stream for reuse across runs.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Ogd,
    Ons,
    #[value(name = "fast-ons")]
    FastOns,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Ogd => Algorithm::Ogd,
            AlgoArg::Ons => Algorithm::Ons,
            AlgoArg::FastOns => Algorithm::FastOns,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Csv,
    Wav,
    Synth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

/// Flags shared by the subcommands that consume a sample stream.
#[derive(Debug, Args)]
struct StreamArgs {
    /// Input path, or "synthetic" for a generated AR stream.
    #[arg(long, default_value = "synthetic", env = "FONS_INPUT")]
    input: String,

    /// Input format; inferred from the input when omitted.
    #[arg(long, value_enum, env = "FONS_INPUT_FORMAT")]
    input_format: Option<InputFormat>,

    /// Maximum number of samples to consume (synthetic streams generate
    /// exactly this many; default 10000).
    #[arg(long, env = "FONS_CAP")]
    cap: Option<usize>,

    /// RNG seed for synthetic streams.
    #[arg(long, default_value_t = 42, env = "FONS_SEED")]
    seed: u64,

    /// AR coefficients of the synthetic stream, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = [0.4, 0.2, 0.1, 0.05, 0.05],
        env = "FONS_COEFFS"
    )]
    coeffs: Vec<f64>,

    /// Noise standard deviation of the synthetic stream.
    #[arg(long, default_value_t = 0.1, env = "FONS_NOISE_STD")]
    noise_std: f64,
}

#[derive(Debug, Args)]
struct HyperArgs {
    /// Window length M.
    #[arg(long, default_value_t = 64, env = "FONS_DIM")]
    dim: usize,

    /// Step size μ; weight updates scale by 1/μ.
    #[arg(long, default_value_t = 0.003, env = "FONS_STEP_SIZE")]
    step_size: f64,

    /// Diagonal loading α of the initial Hessian proxy.
    #[arg(long, default_value_t = 1.0, env = "FONS_ALPHA")]
    alpha: f64,

    /// Error threshold ε below which the weight update is skipped.
    #[arg(long, default_value_t = 1e-8, env = "FONS_EPSILON")]
    epsilon: f64,
}

impl HyperArgs {
    fn build(&self) -> Result<HyperParams, ParamError> {
        HyperParams::new(self.dim, self.step_size, self.alpha, self.epsilon)
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output path; stdout when omitted. Files are written atomically.
    #[arg(long, env = "FONS_OUTPUT")]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, env = "FONS_OUTPUT_FORMAT")]
    output_format: Option<OutputFormat>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Learner to run.
    #[arg(long, value_enum, default_value = "fast-ons", env = "FONS_ALGO")]
    algo: AlgoArg,

    #[command(flatten)]
    hyper: HyperArgs,

    #[command(flatten)]
    stream: StreamArgs,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    hyper: HyperArgs,

    #[command(flatten)]
    stream: StreamArgs,

    /// Worst-case deviation the equivalence gate accepts.
    #[arg(long, default_value_t = 1e-6, env = "FONS_TOLERANCE")]
    tolerance: f64,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Window lengths to sweep, comma separated, ascending.
    #[arg(long, required = true, value_delimiter = ',', env = "FONS_BENCH_DIMS")]
    bench_dims: Vec<usize>,

    /// Algorithms to time.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_values = ["ons", "fast-ons"],
        env = "FONS_ALGOS"
    )]
    algos: Vec<AlgoArg>,

    /// Prediction steps per timed run.
    #[arg(long, default_value_t = 20_000, env = "FONS_CAP")]
    cap: usize,

    /// Timed runs per cell; the median is reported.
    #[arg(long, default_value_t = 3, env = "FONS_REPEATS")]
    repeats: usize,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// AR coefficients, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = [0.4, 0.2, 0.1, 0.05, 0.05],
        env = "FONS_COEFFS"
    )]
    coeffs: Vec<f64>,

    /// Noise standard deviation.
    #[arg(long, default_value_t = 0.1, env = "FONS_NOISE_STD")]
    noise_std: f64,

    /// RNG seed.
    #[arg(long, default_value_t = 42, env = "FONS_SEED")]
    seed: u64,

    /// Number of samples to generate.
    #[arg(long, default_value_t = 1000, env = "FONS_CAP")]
    cap: usize,

    #[command(flatten)]
    out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Synth(args) => cmd_synth(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fons: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] SourceError),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) | CliError::Io(_) => EXIT_DATA,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Source(s) => CliError::Data(s),
            HarnessError::Predictor { .. } => CliError::Numerical(e.to_string()),
            HarnessError::InvalidConfig(msg) => CliError::Usage(msg),
        }
    }
}

impl StreamArgs {
    fn source(&self) -> Result<StreamSource, CliError> {
        let format = self.input_format.unwrap_or_else(|| {
            if self.input == "synthetic" {
                InputFormat::Synth
            } else if self.input.to_ascii_lowercase().ends_with(".wav") {
                InputFormat::Wav
            } else {
                InputFormat::Csv
            }
        });
        Ok(match format {
            InputFormat::Synth => {
                if self.input != "synthetic" {
                    return Err(CliError::Usage(format!(
                        "input {:?} conflicts with the synthetic input format",
                        self.input
                    )));
                }
                let spec = SynthSpec::new(
                    self.coeffs.clone(),
                    self.noise_std,
                    self.seed,
                    self.cap.unwrap_or(10_000),
                );
                StreamSource::SyntheticAr(spec)
            }
            InputFormat::Wav => StreamSource::Pcm16Mono {
                path: self.input.clone().into(),
                cap: self.cap,
            },
            InputFormat::Csv => StreamSource::CsvColumn {
                path: self.input.clone().into(),
                column: ColumnSelector::Index(0),
                cap: self.cap,
            },
        })
    }

    /// Collect and scale to `[-1, 1]`; degenerate streams (constant or
    /// shorter than two samples) pass through unscaled.
    fn samples(&self) -> Result<Vec<f64>, CliError> {
        let samples = self.source()?.collect()?;
        match scale_minmax(samples.clone()) {
            Ok(scaled) => Ok(scaled),
            Err(SourceError::DegenerateRange) => {
                if samples.len() >= 2 {
                    eprintln!("fons: input has a degenerate range; running unscaled");
                }
                Ok(samples)
            }
            Err(e) => Err(e.into()),
        }
    }
}

impl OutputArgs {
    fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.output_format.unwrap_or(default)
    }
}

fn cmd_run(args: RunArgs) -> Result<u8, CliError> {
    let params = args.hyper.build()?;
    let samples = args.stream.samples()?;
    let metrics = run_samples(args.algo.into(), &params, &samples, true)?;
    let rendered = match args.out.format_or(OutputFormat::Json) {
        OutputFormat::Json => output::json(&metrics)?,
        OutputFormat::Csv => output::run_metrics_csv(&metrics),
    };
    output::emit(args.out.output.as_deref(), &rendered)?;
    Ok(0)
}

fn cmd_compare(args: CompareArgs) -> Result<u8, CliError> {
    let params = args.hyper.build()?;
    let samples = args.stream.samples()?;
    let record = args.out.format_or(OutputFormat::Json) == OutputFormat::Csv;
    let report = compare_samples(&params, &samples, args.tolerance, Precision::F64, record)?;
    let rendered = match args.out.format_or(OutputFormat::Json) {
        OutputFormat::Json => output::json(&report)?,
        OutputFormat::Csv => output::equivalence_csv(&report),
    };
    output::emit(args.out.output.as_deref(), &rendered)?;
    if report.passed {
        Ok(0)
    } else {
        eprintln!(
            "fons: equivalence gate failed: max deviation {:.3e} > tolerance {:.3e}",
            report.max_deviation(),
            report.tolerance
        );
        Ok(EXIT_GATE)
    }
}

fn cmd_bench(args: BenchArgs) -> Result<u8, CliError> {
    let algos: Vec<Algorithm> = args.algos.iter().map(|&a| a.into()).collect();
    let report = bench_sweep(&args.bench_dims, args.cap, args.repeats, &algos)?;
    let rendered = match args.out.format_or(OutputFormat::Json) {
        OutputFormat::Json => output::json(&report)?,
        OutputFormat::Csv => output::bench_csv(&report),
    };
    output::emit(args.out.output.as_deref(), &rendered)?;
    Ok(0)
}

fn cmd_synth(args: SynthArgs) -> Result<u8, CliError> {
    let spec = SynthSpec::new(args.coeffs.clone(), args.noise_std, args.seed, args.cap);
    let samples = StreamSource::SyntheticAr(spec).collect()?;
    let rendered = match args.out.format_or(OutputFormat::Csv) {
        OutputFormat::Csv => output::samples_csv(&samples),
        OutputFormat::Json => output::json(&serde_json::json!({
            "schema_version": 1,
            "samples": samples,
        }))?,
    };
    output::emit(args.out.output.as_deref(), &rendered)?;
    Ok(0)
}
