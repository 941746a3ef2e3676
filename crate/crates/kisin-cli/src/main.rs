//! `kisin`: command-line front end for the dimension engine.
//!
//! Exit codes: 0 success, 1 invalid input, 2 node budget exceeded, 3 a
//! verified property failed or an internal consistency check tripped.

mod commands;
mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kisin_core::KisinError;

use output::Format;

/// Seed used by randomized suites when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Debug, Parser)]
#[command(name = "kisin", version, about = "Exact dimensions of Kisin varieties and related polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact dimension of X_mu, X_{<=mu} or X_{<=e} by lattice-point search.
    Dim(DimArgs),
    /// Closed-form lower and upper bounds for the same targets.
    Bounds(TargetArgs),
    /// Vertex counts (`--dmax`) or vertex coordinates (`--d`) of K(b) and K(b)+C*.
    Tables(TablesArgs),
    /// Explicit lattice point realizing a lower bound, with its checks.
    Witness(TargetArgs),
    /// Hasse diagram of the order on permutations of size d.
    Hasse(HasseArgs),
    /// Consistency and invariant suites; exit 0 iff all pass.
    Verify(VerifyArgs),
    /// Closed-form functions of the rank-2 lattice example.
    D2Oracle(D2Args),
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Instance {
    /// Rank d >= 1.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    /// Frobenius degree b >= 2.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    b: u64,
    /// Use the h = 0 regime (dimensions become intervals).
    #[arg(long)]
    h0: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum TargetKind {
    /// X_mu (needs --mu).
    Mu,
    /// X_{<=mu} (needs --mu).
    LeMu,
    /// X_{<=e} (needs --e).
    LeE,
}

#[derive(Debug, Args)]
struct TargetArgs {
    #[command(flatten)]
    inst: Instance,
    /// Elementary-divisor exponents, comma separated and nonincreasing.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "e")]
    mu: Option<Vec<i64>>,
    /// Bound e for X_{<=e}.
    #[arg(long)]
    e: Option<i64>,
    /// Which variety; defaults to mu with --mu and le-e with --e.
    #[arg(long, value_enum)]
    target: Option<TargetKind>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct DimArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Maximum number of search nodes before refusing.
    #[arg(long, default_value_t = 200_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

#[derive(Debug, Args)]
struct TablesArgs {
    /// Frobenius degree b >= 2.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    b: u64,
    /// Vertex counts for d = 2..=dmax.
    #[arg(long, conflicts_with = "d", required_unless_present = "d", value_parser = clap::value_parser!(u32).range(2..))]
    dmax: Option<u32>,
    /// Vertex coordinates for this d.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    d: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct HasseArgs {
    /// Permutation size, at most 6 (the diagram is built by all-pairs comparison).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
    d: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    inst: Instance,
    /// Largest e in the X_{<=e} window.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(i64).range(0..))]
    e: i64,
    /// Largest mu_1 in the mu grid (normalized by mu_d = 0).
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(i64).range(0..))]
    spread: i64,
    /// Maximum number of search nodes per exact query.
    #[arg(long, default_value_t = 200_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct D2Args {
    /// Frobenius degree b >= 2.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    b: u64,
    /// Exponent alpha; the example needs gamma < delta < alpha.
    #[arg(long, allow_hyphen_values = true)]
    alpha: i64,
    /// Valuation gamma of the off-diagonal coefficient.
    #[arg(long, allow_hyphen_values = true)]
    gamma: i64,
    /// Exponent delta.
    #[arg(long, allow_hyphen_values = true)]
    delta: i64,
    #[command(flatten)]
    common: Common,
}

/// Failure of a run, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Budget(String),
    Failed(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Budget(_) => 2,
            Failure::Failed(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Budget(m) | Failure::Failed(m) => m,
        }
    }
}

impl From<KisinError> for Failure {
    fn from(e: KisinError) -> Self {
        match e {
            KisinError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            KisinError::Internal(_) => Failure::Failed(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Dim(a) => commands::dim(&a),
        Command::Bounds(a) => commands::bounds(&a),
        Command::Tables(a) => commands::tables(&a),
        Command::Witness(a) => commands::witness(&a),
        Command::Hasse(a) => commands::hasse(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::D2Oracle(a) => commands::d2_oracle(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational = !e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if informational { 0 } else { 1 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("kisin: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
