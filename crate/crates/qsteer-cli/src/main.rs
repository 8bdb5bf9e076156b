//! `qsteer` — steering and MUB-correlation measures for two-qubit states.
//!
//! Subcommands: `analyze` a single state, `sweep` a state family into a
//! table, `verify` the analytic relations, and `oracle` the numeric
//! maximizers against the closed forms. All randomness derives from one
//! `--seed`, so identical invocations produce byte-identical output.

mod commands;
mod config;
mod output;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "qsteer",
    version,
    about = "Steering measures (F2/F3, S2/S3) and MUB correlation measures (C1/C2/C3) for two-qubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute F2, F3, S2, S3, C2, C3 for one state (closed forms for
    /// Bell-diagonal input, numeric maximization otherwise)
    Analyze(AnalyzeArgs),
    /// Emit one row of closed-form measures per state of a family
    Sweep(SweepArgs),
    /// Check the C2(F2)/C3(F3) identities, monotonicity, and the S_n
    /// normalization constants
    Verify(VerifyArgs),
    /// Compare numeric maximizations against the closed forms on random
    /// Bell-diagonal states
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Werner,
    Grid,
    Random,
}

/// Flags shared by all subcommands. Unset flags fall back to the values in
/// `--config`, then to built-in defaults.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// RNG seed (default 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file supplying defaults; explicit flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Path to a state file: {"matrix": [[[re,im],...],...]} or {"c":[c1,c2,c3]}
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Inline Bell-diagonal correlation vector "c1,c2,c3"
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// State family to sweep
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Number of random samples (family = random)
    #[arg(long)]
    pub samples: Option<usize>,
    /// Number of grid points on the c3 axis (family = grid)
    #[arg(long)]
    pub grid: Option<usize>,
    /// First Werner parameter (family = werner)
    #[arg(long)]
    pub p_start: Option<f64>,
    /// Last Werner parameter (family = werner)
    #[arg(long)]
    pub p_end: Option<f64>,
    /// Werner parameter step (family = werner)
    #[arg(long)]
    pub p_step: Option<f64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of sampled states for the relation-identity check
    #[arg(long)]
    pub samples: Option<usize>,
    /// Monotonicity grid size
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of sampled states to compare
    #[arg(long)]
    pub samples: Option<usize>,
}

/// Errors mapped onto the exit-code contract: 1 validation/parse, 2
/// verification failure, 3 convergence failure.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Verification(String),
    Convergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Convergence(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Verification(m) | CliError::Convergence(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("i/o error: {e}"))
    }
}

impl From<qsteer::qstate::StateError> for CliError {
    fn from(e: qsteer::qstate::StateError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<qsteer::steering::SteeringError> for CliError {
    fn from(e: qsteer::steering::SteeringError) -> Self {
        match e {
            qsteer::steering::SteeringError::Convergence(inner) => {
                CliError::Convergence(inner.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<qsteer::scmub::ScmubError> for CliError {
    fn from(e: qsteer::scmub::ScmubError) -> Self {
        match e {
            qsteer::scmub::ScmubError::Convergence(inner) => {
                CliError::Convergence(inner.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<qsteer::verify::VerifyError> for CliError {
    fn from(e: qsteer::verify::VerifyError) -> Self {
        use qsteer::verify::VerifyError::*;
        match e {
            MonotonicityViolation { .. }
            | OrderPreservationViolation { .. }
            | NormalizationViolation { .. } => CliError::Verification(e.to_string()),
            Admissibility(inner) => inner.into(),
            OutOfDomain { .. } | GridTooSmall(_) => CliError::Input(e.to_string()),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors; flag misuse maps to exit code 1
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let _ = e.print();
            std::process::exit(1);
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => commands::analyze(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Verify(args) => commands::verify(args),
        Command::Oracle(args) => commands::oracle(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
