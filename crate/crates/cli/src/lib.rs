//! Command-line front end: argument parsing, dispatch to the core library,
//! and CSV/JSON/SVG emission into an output directory.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rsl_core::Error;

pub use output::OutDir;

#[derive(Parser, Debug)]
#[command(name = "rsl", version, about = "Polynomial ergodic averages, variational seminorms and exponential sums")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply M_t (one time) or the whole family over a time grid to a grid function.
    Avg(AvgArgs),
    /// Seminorm of the family (M_t f) over a time grid.
    Seminorm(SeminormArgs),
    /// Exponential-sum diagnostics: gauss, minor-arc, approx, phi.
    Fourier(FourierArgs),
    /// List the fractions of Σ_{≤N^u} as JSON.
    Sigma(SigmaArgs),
    /// Witness search for the constant of S_p(M_t f)/‖f‖_p.
    Constants(ConstantsArgs),
    /// Coefficient uniformity sweep (--coeffs) or stabilization in N (--N).
    Sweep(SweepArgs),
    /// Randomized inequality suite on scalar sequences and families.
    Suite(SuiteArgs),
    /// SVG plot of a results CSV: first column against the others.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output directory, created if absent.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// Polynomial map, e.g. "n^2", "n1*n2", "n^2; n^3".
    #[arg(long, default_value = "n")]
    pub map: String,
    #[arg(long, default_value = "ball")]
    pub body: String,
}

#[derive(Args, Debug)]
pub struct AvgArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Single time; writes average.grid.
    #[arg(long, conflicts_with = "grid")]
    pub t: Option<f64>,
    /// Time grid; writes results.csv.
    #[arg(long)]
    pub grid: Option<String>,
    /// Grid file (text or binary) or the literal `delta`.
    #[arg(long, default_value = "delta")]
    pub input: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SeminormArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, default_value = "dyadic:0..4")]
    pub grid: String,
    #[arg(long, default_value = "sup")]
    pub kind: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value = "delta")]
    pub input: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct FourierArgs {
    /// gauss | minor-arc | approx | phi
    pub task: String,
    /// Map whose arity and degree fix the canonical Γ.
    #[arg(long, default_value = "n^2")]
    pub map: String,
    #[arg(long, default_value = "ball")]
    pub body: String,
    /// Largest q (gauss) or largest level n (other tasks).
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub u: u32,
    #[arg(long, default_value_t = 0.09)]
    pub chi: f64,
    /// Numerator samples (gauss) or grid points per axis (other tasks).
    #[arg(long)]
    pub budget: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SigmaArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub u: u32,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    /// Experiment file (`key = value` lines); flags given explicitly override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub body: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Ascent iterations per restart.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub experiment: ConstantsArgs,
    /// Coefficient range a..b for the maps c·P.
    #[arg(long, conflicts_with = "n")]
    pub coeffs: Option<String>,
    /// Largest N of the schedule 2, 4, …, N.
    #[arg(long = "N")]
    pub n: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// CSV with a numeric first column.
    #[arg(long)]
    pub input: PathBuf,
    /// Axis scaling: log-log or semi-log.
    #[arg(long, default_value = "log-log")]
    pub kind: String,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Outcome of a failed command, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Validation(Error),
    /// Exit 2: an inequality with an explicit constant failed.
    Assertion { message: String, witness: Option<PathBuf> },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PropertyViolation { .. } => Failure::Assertion { message: e.to_string(), witness: None },
            other => Failure::Validation(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Validation(Error::Io(e))
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Assertion { .. } => 2,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Failure::Validation(e) => serde_json::json!({
                "error": e.kind(),
                "message": e.to_string(),
                "exit_code": 1,
            }),
            Failure::Assertion { message, witness } => serde_json::json!({
                "error": "assertion",
                "message": message,
                "witness": witness.as_ref().map(|p| p.display().to_string()),
                "exit_code": 2,
            }),
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("RSL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. Errors go to stderr as one JSON object.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rec = serde_json::json!({ "error": "usage", "message": e.to_string(), "exit_code": 1 });
            eprintln!("{rec}");
            return 1;
        }
    };
    configure_threads();
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            if let Failure::Assertion { witness: Some(p), .. } = &f {
                println!("witness: {}", p.display());
            }
            eprintln!("{}", f.to_json());
            f.exit_code()
        }
    }
}
