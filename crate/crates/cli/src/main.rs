use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

/// Deliberational dynamics on two-act, two-state decision problems.
#[derive(Debug, Parser)]
#[command(name = "deliberate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plane of indifference, manifold relation, verdict and mixed equilibrium.
    Analyze(AnalyzeArgs),
    /// Integrate one trajectory.
    Simulate(SimulateArgs),
    /// Integrate a grid of starts and compare with the predicted endpoints.
    Sweep(SweepArgs),
    /// Search relative speeds for trajectories ending at a target probability.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Problem file: {"acts": [..], "states": [..], "payoffs": [[..], [..]]}.
    #[arg(long)]
    problem: PathBuf,
    /// Dynamics config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, created if absent.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
    /// Seed for randomized start sets.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ControlArgs {
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    #[arg(long, default_value_t = 1e4)]
    max_time: f64,
    #[arg(long, default_value_t = 1e-8)]
    eps_rate: f64,
    #[arg(long, default_value_t = 1e-6)]
    eps_gap: f64,
    #[arg(long, default_value_t = 1e-3)]
    pure_band: f64,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: Common,
    /// Predictor reliability r: P(S2|A1) = 1 - r and P(S2|A2) = r at equilibrium.
    #[arg(long, default_value_t = 0.99)]
    reliability: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    controls: ControlArgs,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q1: f64,
    #[arg(long)]
    q2: f64,
    /// Write every n-th step; 0 writes only the first and last rows.
    #[arg(long, default_value_t = 1)]
    stride: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    controls: ControlArgs,
    /// Cells per axis; overridden per axis by --n-p, --n-q1, --n-q2.
    #[arg(long, default_value_t = 11)]
    grid: usize,
    #[arg(long)]
    n_p: Option<usize>,
    #[arg(long)]
    n_q1: Option<usize>,
    #[arg(long)]
    n_q2: Option<usize>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    controls: ControlArgs,
    /// Target P(A2).
    #[arg(long)]
    target: f64,
    /// Independence variants: shortest_path, one_sided_a1, one_sided_a2, weighted:W.
    #[arg(long, value_delimiter = ',', default_value = "shortest_path")]
    variants: Vec<String>,
    #[arg(long, default_value_t = 0.1)]
    lambda_min: f64,
    #[arg(long, default_value_t = 10.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 9)]
    lambda_n: usize,
    /// Start set: grid:N, random:N, targeted:N or on-plane:N.
    #[arg(long, default_value = "grid:5")]
    starts: String,
    /// Largest accepted |p_final - target|.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(args) => commands::analyze(args),
        Command::Simulate(args) => commands::simulate(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Search(args) => commands::search(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
