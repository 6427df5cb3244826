//! `liplab`: run Lipschitz-game experiments from the command line.
//!
//! Exit status is 0 when the checked property holds, 1 when it is refuted,
//! and 2 for usage, parse or I/O errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "liplab", version, about = "Query-complexity experiments on Lipschitz games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a profile is an approximate equilibrium of a game.
    Verify(VerifyArgs),
    /// Run query algorithms against the Matching Pennies adversary.
    Adversary(AdversaryArgs),
    /// Trace the approximate-CE region of two-player Matching Pennies.
    Region(RegionArgs),
    /// Population-game reduction: query accounting and equilibrium transfer.
    Reduce(ReduceArgs),
    /// Scan random Lipschitz games for approximate pure equilibria.
    Existence(ExistenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, default_value = "0")]
    pub epsilon: String,
    /// PNE, WSNE, ANE or ACE. Defaults to PNE, ANE or ACE by profile kind.
    #[arg(long)]
    pub concept: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct AdversaryArgs {
    /// Comma-separated algorithm names, e.g. `uniform-output,point-mass`.
    #[arg(long, default_value = "uniform-output")]
    pub algorithm: String,
    /// Number of Matching Pennies pairs; a comma-separated list sweeps.
    #[arg(long, default_value = "2")]
    pub k: String,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value = "0.1")]
    pub alpha: String,
    /// Payoff scale of the instance (a `lambda`-Lipschitz game).
    #[arg(long, default_value = "1")]
    pub lambda: String,
    /// Seed for `random-sampler` when the algorithm name gives none.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    /// Comma-separated alpha values; fractions like `1/3` are accepted.
    #[arg(long, default_value = "1/2,1/3,1/6,1/24")]
    pub alpha: String,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Number of evenly spaced levels of Pr(last, last) in [0, 1].
    #[arg(long, default_value_t = 21)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// Base game file; defaults to two-player Matching Pennies.
    #[arg(long)]
    pub game: Option<PathBuf>,
    /// Population sizes, comma-separated (one per base player).
    #[arg(long)]
    pub sizes: Option<String>,
    /// Per-player influence bounds; derives the sizes instead of `--sizes`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Expected sum of `--lambda`, checked if given.
    #[arg(long = "Lambda")]
    pub total_lambda: Option<String>,
    #[arg(long, default_value = "0.6")]
    pub epsilon: String,
    /// Accuracy of the simulated distribution queries; 0 answers exactly.
    #[arg(long, default_value = "0")]
    pub delta: String,
    /// Support promise of the population query; defaults to `1/m`.
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long, default_value = "0.05")]
    pub eta: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ExistenceArgs {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value = "0.3")]
    pub epsilon: String,
    /// Lipschitz parameter; defaults to `eps / sqrt(8 n ln 4n)`.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = commands::apply_enumeration_limit() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Adversary(a) => commands::adversary(a),
        Command::Region(a) => commands::region(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::Existence(a) => commands::existence(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
