//! Command-line front end for approximation experiments: pipeline runs,
//! identity verification, Poincaré sweeps, and mollifier demos, with
//! machine-readable CSV/JSON output.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage/configuration error.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use cubeapprox::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "cubeapprox",
    version,
    about = "Simultaneous polynomial approximation experiments on the unit cube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate a built-in function and report per-derivative sup errors
    Approximate(ApproximateArgs),
    /// Verify the partition-of-unity identity Σ_σ σ(x^β) = 1
    VerifyIdentity(VerifyIdentityArgs),
    /// Numerical Poincaré inequality checks and sweeps
    Poincare(PoincareArgs),
    /// Dilate-and-mollify convergence demo
    MollifyDemo(MollifyDemoArgs),
}

/// Shared output/flag plumbing. Flags override the optional JSON config
/// file, which overrides built-in defaults.
#[derive(Args, Clone)]
struct CommonArgs {
    /// Spatial dimension N (1-3)
    #[arg(long)]
    n: Option<usize>,
    /// Output file path (stdout summary is always printed)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// Seed for randomized sweeps
    #[arg(long)]
    seed: Option<u64>,
    /// JSON config file with the same parameters; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ApproximateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Built-in test function name
    #[arg(long = "fn")]
    function: Option<String>,
    /// Target derivative order m (1-3)
    #[arg(long)]
    m: Option<u32>,
    /// Comma-separated Bernstein degrees, e.g. 8,16,32,64
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<u32>>,
    /// Error-report grid nodes per axis
    #[arg(long)]
    grid: Option<usize>,
    /// Per-axis Bernstein degree cap
    #[arg(long)]
    max_degree: Option<u32>,
    /// Write the final polynomial (largest degree) as JSON
    #[arg(long)]
    poly_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyIdentityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Substitution order m (1-3)
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Args)]
struct PoincareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which statement to check: order-one, detailed, or standard
    #[arg(long)]
    statement: Option<String>,
    /// Norm selector: 1, 2, or inf
    #[arg(long)]
    p: Option<String>,
    /// Derivative order m (weight order for detailed, top order for standard)
    #[arg(long)]
    m: Option<u32>,
    /// Chain start order t (detailed statement)
    #[arg(long)]
    t: Option<u32>,
    /// Single built-in function to check instead of a random sweep
    #[arg(long = "fn")]
    function: Option<String>,
    /// Number of random cases in sweep mode
    #[arg(long)]
    cases: Option<usize>,
    /// Grid nodes per axis
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct MollifyDemoArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated dilation steps, e.g. 4,8,16
    #[arg(long, value_delimiter = ',')]
    steps: Option<Vec<u32>>,
    /// Built-in test function name
    #[arg(long = "fn")]
    function: Option<String>,
    /// Derivative order m of the reported W^{m,∞} distance
    #[arg(long)]
    m: Option<u32>,
    /// Kernel smoothness exponent s (default mN−m+1)
    #[arg(long)]
    kernel_s: Option<u32>,
    /// Total derivative order the smoothed oracle must supply
    #[arg(long)]
    target_order: Option<u32>,
    /// Quadrature nodes per axis for the convolution
    #[arg(long)]
    quad: Option<usize>,
    /// Grid nodes per axis for the error report
    #[arg(long)]
    grid: Option<usize>,
}

/// CLI failure classes, mapped onto exit codes.
enum CliError {
    /// Bad flags, caps exceeded, unknown names, unreadable paths: exit 2.
    Usage(String),
    /// The computation itself failed or reported non-convergence: exit 1.
    Numerical(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::SolveResidual { .. }
            | CoreError::NonFiniteSample { .. }
            | CoreError::TraceViolation { .. }
            | CoreError::SigmaStage { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io: {e}"))
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Approximate(args) => commands::run_approximate(args),
        Command::VerifyIdentity(args) => commands::run_verify_identity(args),
        Command::Poincare(args) => commands::run_poincare(args),
        Command::MollifyDemo(args) => commands::run_mollify_demo(args),
    };
    match result {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: usage: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: numerical: {msg}");
            std::process::exit(1);
        }
    }
}
