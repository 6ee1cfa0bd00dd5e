//! Command-line front end: measure computation, trajectory sweeps,
//! theorem verification suites, and channel inspection. Exit codes: 0 on
//! success, 1 on input validation failure, 2 on verification failure.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: files, flags, parameter ranges (exit 1).
    Validation(String),
    /// A verification suite found failing trials (exit 2).
    Verification(String),
}

impl CliError {
    pub fn validation(msg: String) -> Self {
        CliError::Validation(msg)
    }
}

impl From<qcorr::Error> for CliError {
    fn from(e: qcorr::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "qcorr",
    about = "Geometric quantum correlation measures and factorization decay laws",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a correlation measure of a state file.
    Measure(MeasureArgs),
    /// Sweep a channel parameter q(t) and tabulate measures as CSV.
    Evolve(EvolveArgs),
    /// Run a randomized verification suite for one theorem.
    Verify(VerifyArgs),
    /// Report completeness, Choi positivity and the scaling profile of a
    /// channel.
    Inspect(InspectArgs),
}

#[derive(Args)]
struct OptimizerArgs {
    /// Polar resolution of the measurement seeding grid.
    #[arg(long, default_value_t = 24)]
    grid: usize,
    /// Random restarts for families with more than two angles.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Parameter tolerance of the simplex refinement.
    #[arg(long, default_value_t = 1e-8)]
    opt_tol: f64,
    /// Iteration cap per refinement.
    #[arg(long, default_value_t = 600)]
    max_iter: usize,
}

impl OptimizerArgs {
    fn settings(&self) -> qcorr::OptimizerSettings {
        qcorr::OptimizerSettings {
            grid_resolution: self.grid,
            restarts: self.restarts,
            tol: self.opt_tol,
            max_iter: self.max_iter,
            ..qcorr::OptimizerSettings::default()
        }
    }
}

#[derive(Args)]
struct MeasureArgs {
    /// State file (JSON).
    #[arg(long)]
    state: PathBuf,
    /// Measure kind: gqd-p1, gqd-p2, min-p1, min-p2, hellinger-p2,
    /// sym-p1, sym-p2, nqt, fqt, frsp, bmax.
    #[arg(long)]
    measure: String,
    /// Measured side for one-sided kinds.
    #[arg(long, default_value = "a")]
    side: String,
    /// Evaluation method: auto, optimize, closed-form.
    #[arg(long, default_value = "auto")]
    method: String,
    /// Optimizer seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long)]
    state: PathBuf,
    /// Channel constructor without q, e.g. "depol:d=2" or "gad:eta=1".
    #[arg(long)]
    channel: String,
    /// Which side the channel acts on: a, b, or ab (both sides).
    #[arg(long, default_value = "a")]
    side: String,
    /// Comma-separated measure kinds.
    #[arg(long)]
    measure: String,
    /// Linear q sweep start.
    #[arg(long)]
    q_from: Option<f64>,
    /// Linear q sweep end.
    #[arg(long)]
    q_to: Option<f64>,
    /// Exponential schedule q(t) = exp(-gamma t).
    #[arg(long)]
    gamma: Option<f64>,
    /// Time horizon for the exponential schedule.
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of grid points for either schedule.
    #[arg(long)]
    steps: Option<usize>,
    /// Explicit comma-separated q values.
    #[arg(long)]
    q_list: Option<String>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Optimizer seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Theorem selector: t1, t2, t3, t4, eq12.
    #[arg(long)]
    theorem: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Base seed: trial i uses seed + i for states and the optimizer.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Verdict tolerance per trial.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Bipartite dimensions, e.g. 2x2, 2x3, 3x3.
    #[arg(long, default_value = "2x2")]
    dims: String,
    /// Optional per-trial CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Args)]
struct InspectArgs {
    /// Channel file (JSON) or constructor string like "depol:d=2,q=0.3".
    #[arg(long)]
    channel: String,
    /// Also report the minimum Choi eigenvalue.
    #[arg(long, default_value_t = false)]
    choi_check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure(args) => commands::measure(args),
        Command::Evolve(args) => commands::evolve(args),
        Command::Verify(args) => commands::verify(args),
        Command::Inspect(args) => commands::inspect(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
