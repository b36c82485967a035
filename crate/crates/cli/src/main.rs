//! `robust-tails`: fit a heavy-tailed reference to claims data and compute
//! worst-case tail probabilities over Wasserstein and f-divergence balls.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod pipeline;
mod report;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  input error (unreadable file, bad CSV row, invalid flag value)
  3  fit failure (too few exceedances, degenerate or light-tailed data)
  4  numerical failure (solver did not converge, oracle check failed)

Environment:
  ROBUST_TAILS_THREADS  maximum number of worker threads";

#[derive(Debug, Parser)]
#[command(name = "robust-tails", version, about, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the generalized Pareto tail above the threshold.
    Fit(DataArgs),
    /// Estimate the Wasserstein and Hellinger radii and the Hellinger order.
    Radius(RadiusArgs),
    /// Worst-case exceedance curves, ratio tables and return levels.
    Bounds(BoundsArgs),
    /// Compare the solvers against brute-force oracles.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// CSV file with one claim amount per row.
    #[arg(long)]
    pub input: PathBuf,
    /// Zero-based column index.
    #[arg(long, default_value_t = 0)]
    pub column: usize,
    /// Threshold as a value (9.97) or an empirical quantile (q0.95).
    #[arg(long, default_value = "q0.95")]
    pub threshold: String,
    /// JSON report path; CSV series are written next to it. Prints to stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Distortion power of the Wasserstein cost |y^s − z^s|.
    #[arg(long, default_value_t = 1.5)]
    pub s: f64,
    /// Hellinger order; matched to the shape interval if omitted.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Nearest-neighbour count; ⌈√n⌉ over the exceedances if omitted.
    #[arg(long)]
    pub k: Option<usize>,
    /// Synthetic sample size per replicate; 10 × sample size if omitted.
    #[arg(long)]
    pub m: Option<usize>,
    /// Independent synthetic samples averaged in the k-NN estimate.
    #[arg(long, default_value_t = 20)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub radius: RadiusArgs,
    /// f-divergence: kl, hellinger:α, chi2, triangle, jeffrey, js, renyi:α.
    /// `hellinger:auto` and `renyi:auto` use the matched order. Repeatable.
    #[arg(long, default_value = "hellinger:auto")]
    pub divergence: Vec<String>,
    /// `auto`, a number for both families, or `w=…,f=…` (each part a number or auto).
    #[arg(long, default_value = "auto")]
    pub delta: String,
    /// Level grid `min:max:points:log|lin`; defaults to 200 log points from
    /// 1.01·u to the 10⁴-period reference return level.
    #[arg(long)]
    pub grid: Option<String>,
    /// Comma-separated return periods.
    #[arg(long, default_value = "10,50,100,500,1000")]
    pub periods: String,
    #[arg(long, default_value_t = 1.0)]
    pub obs_per_year: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Grid size of the f-divergence scan.
    #[arg(long, default_value_t = 100_000)]
    pub grid_size: usize,
    /// Atoms in the quantile discretization for the transport oracle.
    #[arg(long, default_value_t = 10_000)]
    pub atoms: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn configure_threads() -> Result<(), pipeline::Failure> {
    let Ok(v) = std::env::var("ROBUST_TAILS_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| pipeline::Failure::input(format!("ROBUST_TAILS_THREADS must be a positive integer, got {v:?}")))?;
    // a second initialization in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<(), pipeline::Failure> {
        configure_threads()?;
        match cli.command {
            Command::Fit(a) => pipeline::fit(&a),
            Command::Radius(a) => pipeline::radius(&a),
            Command::Bounds(a) => pipeline::bounds(&a),
            Command::OracleCheck(a) => pipeline::oracle_check(&a),
        }
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
