//! Command-line front end: dataset summaries, FDM exports, model
//! assessment and comparison, tie-strength ranking, noise injection, and
//! null-model experiments. Outputs are deterministic for a fixed seed.

mod commands;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "linkassay", version, about = "Link assessment for social networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-network statistics and edge overlap with the social network
    Summarize(SummarizeArgs),
    /// Export a feature data model as delimited text
    Fdm(FdmArgs),
    /// Train on one source and classify the social network's pairs
    Assess(AssessArgs),
    /// Assess several classifiers side by side
    Compare(CompareArgs),
    /// Rank the social network's pairs by tie strength
    Rank(RankArgs),
    /// Inject fake links and measure how many the model rejects
    Noise(NoiseArgs),
    /// Repeat an assessment on size-matched random graphs
    Nullmodel(NullArgs),
}

#[derive(Args)]
struct Common {
    /// Dataset manifest file
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Directory for emitted files (created if missing)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Disable internal parallelism
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct SummarizeArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true)))]
struct FdmArgs {
    #[command(flatten)]
    common: Common,
    /// Exogenous network id to export
    #[arg(long, group = "source", value_name = "ID")]
    network: Option<String>,
    /// Export the social network's FDM
    #[arg(long, group = "source")]
    sn: bool,
    /// Export the aggregated FDM over all exogenous networks
    #[arg(long, group = "source")]
    aggregated: bool,
    /// Append the density column to a single-network FDM
    #[arg(long)]
    global: bool,
}

#[derive(Args)]
struct AssessArgs {
    #[command(flatten)]
    common: Common,
    /// Training source: an exogenous network id, `aggregated`, or `sn_self`
    #[arg(long, value_name = "SOURCE")]
    train: String,
    /// Model config, e.g. `svm_rbf c=10 gamma=0.5` (default from manifest)
    #[arg(long, value_name = "SPEC")]
    model: Option<String>,
    /// Fold count for `sn_self` cross-validation
    #[arg(long, value_name = "K")]
    kfold: Option<usize>,
    /// Seed for stochastic steps (required unless the manifest sets one)
    #[arg(long)]
    seed: Option<u64>,
    /// Export a probability grid over two features, e.g. `cn,ji`
    #[arg(long, value_name = "F1,F2")]
    grid: Option<String>,
    /// Grid resolution per axis
    #[arg(long, value_name = "N", default_value_t = 25)]
    grid_steps: usize,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    /// Training source: an exogenous network id, `aggregated`, or `sn_self`
    #[arg(long, value_name = "SOURCE")]
    train: String,
    /// Comma-separated model kinds, e.g. `kn,svm,dt,nb,lr`
    #[arg(long, value_name = "LIST")]
    models: String,
    /// Fold count for `sn_self` cross-validation
    #[arg(long, value_name = "K")]
    kfold: Option<usize>,
    /// Seed for stochastic steps (required unless the manifest sets one)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    common: Common,
    /// Training source: an exogenous network id or `aggregated`
    #[arg(long, value_name = "SOURCE")]
    train: String,
    /// Model config (default from manifest)
    #[arg(long, value_name = "SPEC")]
    model: Option<String>,
    /// Seed for stochastic steps (required unless the manifest sets one)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct NoiseArgs {
    #[command(flatten)]
    common: Common,
    /// Training source: an exogenous network id or `aggregated`
    #[arg(long, value_name = "SOURCE")]
    train: String,
    /// Model config (default from manifest)
    #[arg(long, value_name = "SPEC")]
    model: Option<String>,
    /// Comma-separated noise rates in (0, 1]; default 0.1 through 1.0
    #[arg(long, value_name = "LIST")]
    r_values: Option<String>,
    /// Runs per noise rate
    #[arg(long, value_name = "N", default_value_t = 10)]
    runs: usize,
    /// Seed for the injection draws (required unless the manifest sets one)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct NullArgs {
    #[command(flatten)]
    common: Common,
    /// Training source: an exogenous network id, `aggregated`, or `sn_self`
    #[arg(long, value_name = "SOURCE")]
    train: String,
    /// Model config (default from manifest)
    #[arg(long, value_name = "SPEC")]
    model: Option<String>,
    /// Fold count for `sn_self` cross-validation
    #[arg(long, value_name = "K")]
    kfold: Option<usize>,
    /// Matched random-graph replicates
    #[arg(long, value_name = "N", default_value_t = 50)]
    replicates: usize,
    /// Seed for graph generation (required unless the manifest sets one)
    #[arg(long)]
    seed: Option<u64>,
}

/// Failures split by exit code: bad plans exit 2, runtime errors exit 1.
enum Failure {
    Usage(String),
    Runtime(linkassay::Error),
}

impl From<linkassay::Error> for Failure {
    fn from(e: linkassay::Error) -> Failure {
        Failure::Runtime(e)
    }
}

fn main() -> ExitCode {
    match commands::dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
