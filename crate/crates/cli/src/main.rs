//! `maxmod`: exact modularity maximisation from the command line.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input, 3 a search budget
//! or size cap was hit, 4 a validation failure, 1 anything else.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "maxmod", version, about = "Exact and approximate modularity maximisation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Pick by cheap statistics: brute, vc, tw, connsub, then tw-approx.
    Auto,
    Brute,
    Tw,
    TwApprox,
    Connsub,
    Vc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    MinFill,
    MinDegree,
    Random,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// PACE `.td` decomposition for `tw` and `tw-approx` (default: min-fill).
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Relative error for `tw-approx`; uses ⌈1/ε⌉ parts.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Maximise over partitions with at most this many parts (`brute`, `tw`).
    #[arg(long)]
    pub max_parts: Option<usize>,
    /// State budget for the tree-decomposition DP.
    #[arg(long, default_value_t = maxmod::twdp::DEFAULT_STATE_CAP)]
    pub cap_states: usize,
    /// Budget on connected induced subgraphs for `connsub`.
    #[arg(long, default_value_t = maxmod::connsub::DEFAULT_SUBGRAPH_CAP)]
    pub cap_subgraphs: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GadgetArgs {
    /// Edge list of the instance graph H.
    pub graph: PathBuf,
    /// Anchor labels, comma-separated; consecutive pairs are matched.
    #[arg(long, value_delimiter = ',', required = true)]
    pub anchors: Vec<String>,
    /// Use this alpha instead of the default 32·|E(H)|² bound.
    #[arg(long)]
    pub unsafe_alpha: Option<u64>,
    /// Output prefix for `<prefix>.edges` and `<prefix>.meta`
    /// (default: the input path without its extension, plus `.gadget`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compute the parameters without building the gadget graph.
    #[arg(long, conflicts_with = "check_witness")]
    pub metadata_only: bool,
    /// Partition of H to lift and check against q0.
    #[arg(long)]
    pub check_witness: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximise modularity.
    Solve(SolveArgs),
    /// Score a given partition.
    Score {
        graph: PathBuf,
        partition: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build the hardness gadget for an anchored instance.
    Gadget(GadgetArgs),
    /// Structural statistics and solver parameters.
    Stats {
        graph: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        cap_subgraphs: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Emit a tree decomposition in PACE format.
    Decompose {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = HeuristicArg::MinFill)]
        heuristic: HeuristicArg,
        /// Seed for `--heuristic random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a PACE decomposition against a graph.
    ValidateTd {
        graph: PathBuf,
        td: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generate a seeded G(n, p) random graph as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => commands::solve(&args),
        Command::Score { graph, partition, out } => commands::score(&graph, &partition, out.output),
        Command::Gadget(args) => commands::gadget(&args),
        Command::Stats { graph, cap_subgraphs, out } => commands::stats(&graph, cap_subgraphs, out.output),
        Command::Decompose { graph, heuristic, seed, out } => {
            commands::decompose(&graph, heuristic, seed, out.as_deref())
        }
        Command::ValidateTd { graph, td, out } => commands::validate_td(&graph, &td, out.output),
        Command::Gen { n, p, seed } => commands::generate(n, p, seed),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
