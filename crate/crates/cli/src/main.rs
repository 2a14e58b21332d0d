mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use input::BoardArgs;
use output::{exit, Format, Out};

#[derive(Parser, Debug)]
#[command(name = "queens", version, about = "Completing partial n-queens configurations")]
struct Cli {
    /// Output format; structured output is line-delimited JSON
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Exact,
    Pipeline,
    /// the randomized pipeline above n = 64, exact search otherwise
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Central,
    Third,
    NearDiagonal,
    Regularize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanMode {
    Exhaustive,
    Sampled,
    /// exhaustive up to n = 9, sampled above
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Pipeline,
    Lp,
}

#[derive(Args, Debug, Clone)]
pub struct PipelineArgs {
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Full pipeline restarts before giving up
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, default_value_t = 20)]
    pub nibble_restarts: usize,
    /// Maximum vertices in an augmenting sequence
    #[arg(long, default_value_t = 10)]
    pub depth_bound: usize,
    /// Try the five-stage augmenting scheme before breadth-first search
    #[arg(long)]
    pub staged: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extend a partial configuration to a full one, or prove that none exists
    Complete {
        #[command(flatten)]
        board: BoardArgs,
        #[arg(long, value_enum, default_value_t = Strategy::Auto)]
        strategy: Strategy,
        /// Node limit for exact search (0 = unlimited)
        #[arg(long, default_value_t = 0)]
        budget_nodes: u64,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Count completions exactly
    Count {
        #[command(flatten)]
        board: BoardArgs,
        /// Stop after this many completions; required above n = 12
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, default_value_t = 0)]
        budget_nodes: u64,
    },
    /// Produce a line-weighting certificate of incompletability, or check one
    Certify {
        #[command(flatten)]
        board: BoardArgs,
        /// Certificate document to verify instead of generating one
        #[arg(long)]
        verify: Option<std::path::PathBuf>,
        /// Write a generated certificate here instead of standard output
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Node limit for the exact search run when no certificate exists
        #[arg(long, default_value_t = 0)]
        budget_nodes: u64,
    },
    /// Build one of the explicit constructions
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        n: usize,
    },
    /// Completion thresholds for n up to n-max
    QcScan {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, value_enum, default_value_t = ScanMode::Auto)]
        mode: ScanMode,
        /// Samples per size in sampled mode
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Compare exact and fractional completability of random configurations
    Probe {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Smallest board on which a configuration, shifted, becomes completable
    Embed {
        #[command(flatten)]
        board: BoardArgs,
        #[arg(long)]
        n_ceiling: usize,
    },
    /// Seeded benchmark suites
    Bench {
        #[arg(value_enum)]
        suite: Suite,
        /// Sizes: "64,128,256" or "4..12"
        #[arg(long)]
        n: String,
        /// Number of seeds, 0..seeds
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        /// Include wall-clock timings (makes output non-deterministic)
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { format: cli.format };
    commands::configure_threads();
    let result = match cli.command {
        Command::Complete {
            board,
            strategy,
            budget_nodes,
            pipeline,
        } => commands::complete(&out, &board, strategy, budget_nodes, &pipeline, cli.seed),
        Command::Count {
            board,
            cap,
            budget_nodes,
        } => commands::count(&out, &board, cap, budget_nodes),
        Command::Certify {
            board,
            verify,
            out: path,
            budget_nodes,
        } => match verify {
            Some(file) => commands::verify(&out, &file),
            None => commands::certify(&out, &board, path.as_deref(), budget_nodes),
        },
        Command::Construct { kind, n } => commands::construct(&out, kind, n),
        Command::QcScan {
            n_max,
            n_min,
            mode,
            trials,
        } => commands::qc_scan(&out, n_min, n_max, mode, trials, cli.seed),
        Command::Probe { n, k, trials } => commands::probe(&out, n, k, trials, cli.seed),
        Command::Embed { board, n_ceiling } => commands::embed(&out, &board, n_ceiling),
        Command::Bench {
            suite,
            n,
            seeds,
            timings,
            pipeline,
        } => commands::bench(&out, suite, &n, seeds, timings, &pipeline, cli.seed),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::USAGE as u8)
        }
    }
}
