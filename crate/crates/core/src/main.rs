use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use urel_core::bounds::{evaluate_all, EvaluateOptions, RelationId};
use urel_core::harness::emit::{emit_outcomes, emit_summary, emit_sweep, Format, Metadata};
use urel_core::harness::files::{load_observables, load_state};
use urel_core::harness::sweep::{run_sweep, SweepMode, SweepSpec};
use urel_core::harness::verify::{run_verify, VerifyConfig};
use urel_core::shots::{ShotPlan, DEFAULT_RESAMPLES};
use urel_core::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "urel", version = urel_core::harness::emit::VERSION, about = "Variance-based uncertainty relations: sweeps, fuzzing and bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the sum-form relations along a theta or phi family of qubit states.
    Sweep(SweepArgs),
    /// Randomized validity campaign over every relation.
    Verify(VerifyArgs),
    /// Evaluate all relations for a state and observables read from JSON files.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// csv, json or dat (gnuplot columns).
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_mode, default_value = "theta")]
    mode: SweepMode,
    /// The angle held fixed (phi in theta mode, theta in phi mode). Radians,
    /// or degrees with a `deg` suffix. Defaults to 0 (theta mode) or pi/3 (phi mode).
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    fixed: Option<f64>,
    /// Grid points including both endpoints. Defaults to 13 (theta) or 25 (phi).
    #[arg(long)]
    steps: Option<usize>,
    /// Explicit comma-separated swept angles, overriding --steps.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, conflicts_with = "steps")]
    grid: Option<Vec<f64>>,
    /// Simulate this many shots per Pauli basis instead of exact values.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    resamples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated labels or names, e.g. T1,T2,M4.
    #[arg(long, value_delimiter = ',')]
    relations: Option<Vec<RelationId>>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Comma-separated Hilbert-space dimensions to draw from.
    #[arg(long = "dim", value_delimiter = ',', default_value = "2,3,4")]
    dims: Vec<usize>,
    /// Comma-separated observable counts to draw from.
    #[arg(long = "n-observables", value_delimiter = ',', default_value = "2,3,4,5")]
    counts: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the Pauli triple on random qubit states instead of random observables.
    #[arg(long)]
    paulis: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    state_file: PathBuf,
    #[arg(long)]
    observables_file: PathBuf,
    /// Also evaluate the pairwise relations for every pair of observables.
    #[arg(long)]
    pairwise: bool,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_mode(s: &str) -> Result<SweepMode, String> {
    match s.to_ascii_lowercase().as_str() {
        "theta" => Ok(SweepMode::Theta),
        "phi" => Ok(SweepMode::Phi),
        _ => Err(format!("expected theta or phi, got {s:?}")),
    }
}

/// `1.047`, `1.047rad` or `60deg`.
fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (num, degrees) = if let Some(n) = s.strip_suffix("deg") {
        (n, true)
    } else if let Some(n) = s.strip_suffix("rad") {
        (n, false)
    } else {
        (s, false)
    };
    let v: f64 = num.trim().parse().map_err(|_| format!("invalid angle {s:?}"))?;
    if !v.is_finite() {
        return Err(format!("invalid angle {s:?}"));
    }
    Ok(if degrees { v.to_radians() } else { v })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Csv(c) if matches!(c.kind(), csv::ErrorKind::Io(_)) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn sweep(a: SweepArgs) -> Result<u8, Error> {
    let mut spec = match a.mode {
        SweepMode::Theta => SweepSpec::theta_default(),
        SweepMode::Phi => SweepSpec::phi_default(),
    };
    if let Some(f) = a.fixed {
        spec.fixed_value = f;
    }
    if let Some(n) = a.steps {
        spec.steps = n;
    }
    spec.grid = a.grid;
    if let Some(r) = a.relations {
        spec.relations = r;
    }
    spec.resamples = a.resamples;
    let mut meta = Metadata::new();
    meta.mode = Some(spec.mode);
    meta.fixed_value = Some(spec.fixed_value);
    if let Some(n) = a.shots {
        spec.shots = Some(ShotPlan::full(n, a.seed)?);
        meta.seed = Some(a.seed);
        meta.shots = Some(n);
        meta.resamples = Some(a.resamples);
    }
    let rows = run_sweep(&spec)?;
    emit_sweep(&rows, &spec.relations, &meta, a.output.format, a.output.out.as_deref())?;
    Ok(0)
}

fn verify(a: VerifyArgs) -> Result<u8, Error> {
    let config = if a.paulis {
        VerifyConfig::pauli(a.trials, a.seed)
    } else {
        VerifyConfig::random(a.trials, a.dims, a.counts, a.seed)
    };
    let summary = run_verify(&config)?;
    let mut meta = Metadata::new();
    meta.seed = Some(a.seed);
    emit_summary(&summary, &meta, a.output.format, a.output.out.as_deref())?;
    let n = summary.violation_count();
    eprintln!("{} trials, {} violations", summary.trials, n);
    for (r, t) in summary.violations.iter().take(20) {
        eprintln!(
            "violation {} trial {} seed {} dim {} n {} pair {:?} slack {:e}",
            r.label(),
            t.trial,
            t.trial_seed,
            t.dim,
            t.n,
            t.pair,
            t.slack
        );
    }
    Ok(if n > 0 { EXIT_VIOLATION } else { 0 })
}

fn bounds(a: BoundsArgs) -> Result<u8, Error> {
    let state = load_state(&a.state_file)?;
    let set = load_observables(&a.observables_file)?;
    let outcomes = evaluate_all(&set, &state, EvaluateOptions { pairwise: a.pairwise })?;
    emit_outcomes(&outcomes, &Metadata::new(), a.output.format, a.output.out.as_deref())?;
    let failed = outcomes.iter().filter_map(|o| o.report()).any(|r| !r.holds);
    Ok(if failed { EXIT_VIOLATION } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
        Command::Bounds(a) => bounds(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
