//! Experiment driver around the library: `measure`, `recover`, `stability`,
//! `rnmp`, and `sweep` subcommands with file-based artifacts.
//!
//! Every output embeds the config that produced it, floats render at 17
//! significant digits, and all randomness flows from explicit seeds, so
//! re-running a command with identical arguments writes byte-identical
//! files.
//!
//! Exit codes: 0 success, 2 unreadable input or invalid parameters,
//! 3 violated variant precondition, 4 numerical failure. The error name
//! goes to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use symphase::io::{
    fmt_f64, read_measurement, read_signal, write_measurement, write_recovery, write_rnmp_estimate,
    write_stability, write_sweep,
};
use symphase::{
    add_noise, dist_up_to_sign, estimate_alpha, measure, noise_robustness_sweep,
    recover_alternating, recover_direct_with, verify_stability_inequality, AltInit,
    AlternatingOptions, DirectOptions, Error, NoiseKind, NoiseModel, Variant,
};

#[derive(Parser)]
#[command(
    name = "symphase",
    version,
    about = "Stable sign recovery from symmetrized Fourier magnitudes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetrize a signal file and write its Fourier intensities.
    Measure(MeasureArgs),
    /// Recover a signal from a measurement file.
    Recover(RecoverArgs),
    /// Sample the stability ratio over signal pairs.
    Stability(StabilityArgs),
    /// Estimate the restricted minimal convolution norm.
    Rnmp(RnmpArgs),
    /// Trace recovery error against noise level for both methods.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
enum VariantArg {
    /// Length 4n−3; requires a real leading entry.
    A,
    /// Length 4n−1; accepts arbitrary complex signals.
    B,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::A => Variant::A,
            VariantArg::B => Variant::B,
        }
    }
}

impl VariantArg {
    fn label(self) -> &'static str {
        match self {
            VariantArg::A => "A",
            VariantArg::B => "B",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Spectral square root of the autocorrelation, polish included.
    Direct,
    /// Alternating projections between support and magnitude constraints.
    Alternating,
}

impl MethodArg {
    fn label(self) -> &'static str {
        match self {
            MethodArg::Direct => "direct",
            MethodArg::Alternating => "alternating",
        }
    }
}

#[derive(Args)]
struct MeasureArgs {
    /// Input signal file (CSV `index,re,im` or JSON).
    #[arg(long = "in")]
    input: PathBuf,
    /// Symmetrization variant.
    #[arg(long, value_enum, ignore_case = true)]
    variant: VariantArg,
    /// Additive intensity noise scale; 0 keeps the measurement exact.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (.csv or .json).
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Args)]
struct RecoverArgs {
    /// Input measurement file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Recovery method.
    #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
    method: MethodArg,
    /// Ground-truth signal file; the sign-invariant distance is printed and
    /// recorded in the artifact.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Override the perfect-square residual tolerance of the direct method.
    #[arg(long)]
    tol: Option<f64>,
    /// Fail (exit 4) instead of falling back to projections when the
    /// autocorrelation is not a perfect square.
    #[arg(long)]
    strict: bool,
    /// Iteration cap for the alternating method.
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Random-sign initialization seed for the alternating method;
    /// omitted means the all-plus start.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (.csv or .json).
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Args)]
struct StabilityArgs {
    /// Signal dimension.
    #[arg(long)]
    n: usize,
    /// Symmetrization variant.
    #[arg(long, value_enum, ignore_case = true)]
    variant: VariantArg,
    /// Number of sampled pairs.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Lower stability constant to test; 0 records ratios only.
    #[arg(long, default_value_t = 0.0)]
    c_lower: f64,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (.csv or .json).
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Args)]
struct RnmpArgs {
    /// Support size of the first factor.
    #[arg(long)]
    s: usize,
    /// Support size of the second factor (s <= f <= n).
    #[arg(long)]
    f: usize,
    /// Ambient dimension.
    #[arg(long)]
    n: usize,
    /// Random restarts on top of the deterministic flat start.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (.csv or .json).
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Signal dimension.
    #[arg(long)]
    n: usize,
    /// Symmetrization variant.
    #[arg(long, value_enum, ignore_case = true)]
    variant: VariantArg,
    /// Noise scales relative to the peak clean intensity
    /// (repeat the flag or separate with commas).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    sigma: Vec<f64>,
    /// Trials per noise level.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (.csv or .json).
    #[arg(long = "out")]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    if err.is_input_error() {
        2
    } else if matches!(err, Error::NonRealLeadingEntry { .. }) {
        3
    } else {
        // NotAPerfectSquare, OddLeadingIndex: numerical failure.
        4
    }
}

fn run(command: Command) -> symphase::Result<()> {
    match command {
        Command::Measure(a) => run_measure(a),
        Command::Recover(a) => run_recover(a),
        Command::Stability(a) => run_stability(a),
        Command::Rnmp(a) => run_rnmp(a),
        Command::Sweep(a) => run_sweep(a),
    }
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn run_measure(a: MeasureArgs) -> symphase::Result<()> {
    let x = read_signal(&a.input)?;
    let mut m = measure(&x, a.variant.into())?;
    if a.sigma != 0.0 {
        m = add_noise(
            &m,
            &NoiseModel {
                kind: NoiseKind::Intensity,
                sigma: a.sigma,
                seed: a.seed,
            },
        );
    }
    let config = json!({
        "command": "measure",
        "in": path_str(&a.input),
        "variant": a.variant.label(),
        "sigma": a.sigma,
        "seed": a.seed,
        "out": path_str(&a.output),
    });
    write_measurement(&a.output, &m, Some(&config))
}

fn run_recover(a: RecoverArgs) -> symphase::Result<()> {
    let m = read_measurement(&a.input)?;
    let result = match a.method {
        MethodArg::Direct => {
            let mut opts = DirectOptions::default();
            if let Some(tol) = a.tol {
                opts.square_tol = tol;
            }
            if a.strict {
                opts.fallback = false;
            }
            recover_direct_with(&m, &opts)?
        }
        MethodArg::Alternating => {
            let opts = AlternatingOptions {
                max_iter: a.max_iter,
                init: match a.seed {
                    Some(seed) => AltInit::RandomSigns(seed),
                    None => AltInit::AllPlus,
                },
                ..AlternatingOptions::default()
            };
            recover_alternating(&m, &opts)?
        }
    };
    let truth_dist = match &a.truth {
        Some(path) => {
            let truth = read_signal(path)?;
            Some(dist_up_to_sign(&result.estimate, &truth)?)
        }
        None => None,
    };
    println!("residual: {}", fmt_f64(result.residual));
    if let Some(d) = truth_dist {
        println!("truth_dist: {}", fmt_f64(d));
    }
    let config = json!({
        "command": "recover",
        "in": path_str(&a.input),
        "method": a.method.label(),
        "truth": a.truth.as_deref().map(path_str),
        "tol": a.tol,
        "strict": a.strict,
        "max_iter": a.max_iter,
        "seed": a.seed,
        "out": path_str(&a.output),
    });
    write_recovery(&a.output, &result, truth_dist, Some(&config))
}

fn run_stability(a: StabilityArgs) -> symphase::Result<()> {
    let report = verify_stability_inequality(a.variant.into(), a.n, a.trials, a.c_lower, a.seed)?;
    let config = json!({
        "command": "stability",
        "n": a.n,
        "variant": a.variant.label(),
        "trials": a.trials,
        "c_lower": a.c_lower,
        "seed": a.seed,
        "out": path_str(&a.output),
    });
    write_stability(&a.output, &report, Some(&config))
}

fn run_rnmp(a: RnmpArgs) -> symphase::Result<()> {
    let estimate = estimate_alpha(a.s, a.f, a.n, a.restarts, a.seed)?;
    let config = json!({
        "command": "rnmp",
        "s": a.s,
        "f": a.f,
        "n": a.n,
        "restarts": a.restarts,
        "seed": a.seed,
        "out": path_str(&a.output),
    });
    write_rnmp_estimate(&a.output, &estimate, Some(&config))
}

fn run_sweep(a: SweepArgs) -> symphase::Result<()> {
    let report = noise_robustness_sweep(a.variant.into(), a.n, &a.sigma, a.trials, a.seed)?;
    let config = json!({
        "command": "sweep",
        "n": a.n,
        "variant": a.variant.label(),
        "sigma": a.sigma,
        "trials": a.trials,
        "seed": a.seed,
        "out": path_str(&a.output),
    });
    write_sweep(&a.output, &report, Some(&config))
}
