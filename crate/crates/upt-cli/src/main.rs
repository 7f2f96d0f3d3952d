//! `upt`: utility-privacy trade-off toolkit front end.
//!
//! Reads finite joint distributions (JSON), constructs release
//! mechanisms, computes bounds and trade-off curves, runs the exact
//! small-instance oracles, and regenerates the embedded worked cases.
//! Exit codes: 0 ok, 2 validation error, 3 cap exceeded, 4 internal
//! invariant violation. Failures print a machine-readable error object
//! to stderr.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use upt_core::Error;

#[derive(Parser)]
#[command(name = "upt", version, about = "utility-privacy trade-off toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Full,
    Public,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

/// Exactly one input source: a joint-pmf document or a seeded instance.
#[derive(clap::Args, Clone, Debug)]
pub struct SourceArgs {
    /// Path to a joint-pmf JSON document
    #[arg(long, conflicts_with_all = ["seed", "nx", "ny"])]
    pub input: Option<String>,
    /// Seed for a reproducible random instance (requires --nx/--ny)
    #[arg(long, requires = "nx", requires = "ny")]
    pub seed: Option<u64>,
    /// Private-alphabet size of the seeded instance
    #[arg(long)]
    pub nx: Option<usize>,
    /// Public-alphabet size of the seeded instance
    #[arg(long)]
    pub ny: Option<usize>,
}

#[derive(clap::Args, Clone, Copy, Debug)]
pub struct TolArgs {
    /// Distribution-validation tolerance
    #[arg(long, default_value_t = upt_core::tol::TOL_PMF)]
    pub tol_pmf: f64,
    /// Posterior-equality tolerance
    #[arg(long, default_value_t = upt_core::tol::TOL_EQ)]
    pub tol_eq: f64,
    /// Linear-program feasibility tolerance
    #[arg(long, default_value_t = upt_core::tol::TOL_LP)]
    pub tol_lp: f64,
}

#[derive(Subcommand)]
pub enum Command {
    /// Closed-form bounds and rank bounds on the perfect-privacy utility
    Bound {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        tol: TolArgs,
        /// Output path (stdout when absent)
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Construct a perfect-privacy mechanism and report its evaluation
    Mechanism {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        out: Option<String>,
    },
    /// Achievable trade-off points, envelope, and sanity band
    Curve {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Replace constructed utilities by their closed-form bounds
        /// (full-observation model only)
        #[arg(long)]
        nonalgorithmic: bool,
        /// Cap on enumerated subsets or orderings
        #[arg(long)]
        cap: Option<usize>,
        /// Also evaluate the envelope on this many evenly spaced leakage
        /// values
        #[arg(long)]
        epsilon_grid: Option<usize>,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Exact perfect-privacy value by extreme-point enumeration plus the
    /// simplex
    Oracle {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Cap on enumerated vertices
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Emit a reproducible random joint-pmf document
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Regenerate an embedded worked case
    Reproduce {
        /// One of: example1, example3, cyclic, bec, figure4, figure5,
        /// figure6
        case: String,
        /// Directory for the emitted artifacts
        #[arg(long, default_value = ".")]
        out_dir: String,
        /// Cap forwarded to curve construction (figure cases)
        #[arg(long)]
        cap: Option<usize>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::TooManySubsets { .. }
        | Error::TooManyOrderings { .. }
        | Error::TooManyVertices { .. } => 3,
        Error::Invariant(_) | Error::LpInfeasible => 4,
        _ => 2,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::NegativeEntry { .. } => "negative_entry",
        Error::SumNotOne { .. } => "sum_not_one",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::OutOfRange { .. } => "out_of_range",
        Error::EmptyInput => "empty_input",
        Error::IncompatibleAlphabets(_) => "incompatible_alphabets",
        Error::WrongAlphabetSize { .. } => "wrong_alphabet_size",
        Error::SubsetTooLarge { .. } => "subset_too_large",
        Error::TooManySubsets { .. } => "too_many_subsets",
        Error::TooManyOrderings { .. } => "too_many_orderings",
        Error::TooManyVertices { .. } => "too_many_vertices",
        Error::SymbolReused { .. } => "symbol_reused",
        Error::LpInfeasible => "lp_infeasible",
        Error::InvalidChannel(_) => "invalid_channel",
        Error::InvalidInput(_) => "invalid_input",
        Error::Invariant(_) => "invariant_violation",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let doc = serde_json::json!({
                "error": { "kind": error_kind(&err), "message": err.to_string() }
            });
            eprintln!("{doc}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
