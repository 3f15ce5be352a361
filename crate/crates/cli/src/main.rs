use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod load;

/// Verifies tight logic programs with input and output against first-order
/// specifications.
#[derive(Parser)]
#[command(name = "tightverify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Proves that a program implements a specification.
    Verify(VerifyArgs),
    /// Prints the completion of a program.
    Complete(CompleteArgs),
    /// Prints the predicate dependency graph and the applicability checks.
    Analyze(AnalyzeArgs),
    /// Computes stable models and io-models on a bounded universe.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct Sources {
    /// Program file.
    program: PathBuf,
    /// Specification files (declarations, assumptions, specs, axioms, lemmas).
    specs: Vec<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
    Both,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum GuardArg {
    /// Remainders are compared with the quotient.
    #[default]
    Quotient,
    /// Remainders are compared with the divisor.
    Divisor,
}

impl From<GuardArg> for tightverify_core::translate::DivisionGuard {
    fn from(guard: GuardArg) -> Self {
        match guard {
            GuardArg::Quotient => Self::Quotient,
            GuardArg::Divisor => Self::Divisor,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    sources: Sources,
    /// Prover executable; defaults to $TIGHTVERIFY_PROVER or `vampire`.
    #[arg(long)]
    prover_path: Option<PathBuf>,
    /// Extra prover argument, placed before the task file (repeatable).
    #[arg(long = "prover-arg", allow_hyphen_values = true)]
    prover_args: Vec<String>,
    /// Time limit per proof step in seconds.
    #[arg(long, default_value_t = 300.0)]
    time_limit: f64,
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    direction: DirectionArg,
    /// Writes the TPTP task of every proof step to this directory.
    #[arg(long)]
    emit_tptp: Option<PathBuf>,
    /// Only writes the tasks; requires --emit-tptp.
    #[arg(long, requires = "emit_tptp")]
    emit_only: bool,
    /// Continues after a step that is not proven.
    #[arg(long)]
    keep_going: bool,
    /// Runs the forward and backward passes concurrently.
    #[arg(long)]
    parallel: bool,
    /// Prints and proves the completion as translated, without simplification
    #[arg(long)]
    no_simplify: bool,
    #[arg(long, value_enum, default_value_t)]
    division_guard: GuardArg,
    /// Prints the result as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CompleteArgs {
    #[command(flatten)]
    sources: Sources,
    /// Prints and proves the completion as translated, without simplification
    #[arg(long)]
    no_simplify: bool,
    #[arg(long, value_enum, default_value_t)]
    division_guard: GuardArg,
    /// Prints the result as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    sources: Sources,
    /// Prints the result as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    sources: Sources,
    /// Placeholder value, e.g. `n=3` (repeatable).
    #[arg(long = "let", value_name = "NAME=VALUE")]
    valuation: Vec<String>,
    /// File of facts over the input symbols (repeatable).
    #[arg(long = "input", value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Integer range of the universe.
    #[arg(long, default_value = "0..4", allow_hyphen_values = true)]
    int_range: String,
    /// Additional symbolic constants of the universe (repeatable).
    #[arg(long = "constant")]
    constants: Vec<String>,
    /// Adds #inf and #sup to the universe.
    #[arg(long)]
    extremes: bool,
    /// Maximal number of relevant atoms for stable-model enumeration.
    #[arg(long, default_value_t = tightverify_core::oracle::MAX_STABLE_MODEL_ATOMS)]
    max_atoms: usize,
    #[arg(long, value_enum, default_value_t)]
    division_guard: GuardArg,
    /// Prints the result as JSON
    #[arg(long)]
    json: bool,
}

/// Why a command did not succeed, with its exit status.
#[derive(Debug)]
pub enum Failure {
    /// Verification incomplete, a step refuted, or a check failed.
    Unsuccessful,
    Usage(String),
    Rejected(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Unsuccessful => 1,
            Failure::Usage(_) => 2,
            Failure::Rejected(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Verify(args) => commands::verify(args),
        Command::Complete(args) => commands::complete(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Oracle(args) => commands::oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Failure::Usage(message) | Failure::Rejected(message) = &failure {
                eprintln!("error: {message}");
            }
            ExitCode::from(failure.code())
        }
    }
}
