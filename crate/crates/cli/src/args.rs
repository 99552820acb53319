use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrank_core::QuantumBackend;

#[derive(Debug, Parser)]
#[command(
    name = "qrank",
    version,
    about = "Classical and quantum PageRank experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated or benchmark network as an edge list (Pajek for .net
    /// output paths).
    Gen {
        #[command(flatten)]
        input: InputArgs,
        /// Output path; stdout if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classical PageRank by the power method.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = qrank_core::DEFAULT_ALPHA)]
        alpha: f64,
        /// Iterate the patched matrix E (or H with --unpatched) without
        /// damping.
        #[arg(long)]
        bare: bool,
        /// With --bare, leave dangling columns empty.
        #[arg(long, requires = "bare")]
        unpatched: bool,
        /// L1 stopping tolerance of the power method.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        /// Start from a point mass on this node instead of the uniform
        /// vector.
        #[arg(long)]
        start: Option<usize>,
    },
    /// Instantaneous and time-averaged quantum PageRank.
    Qrank {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = qrank_core::DEFAULT_ALPHA)]
        alpha: f64,
        /// First two-step included in the recorded window.
        #[arg(long, default_value_t = 0)]
        offset: usize,
    },
    /// Pairwise fidelities of rankings across a damping grid.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        walk: WalkArgs,
        /// `lo:hi:count`, endpoints included.
        #[arg(long, default_value = "0.01:0.98:10")]
        grid: String,
        #[arg(long, value_enum, default_value_t = RankerChoice::Quantum)]
        ranker: RankerChoice,
    },
    /// Remove the top hubs and compare survivor orderings.
    Attack {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = qrank_core::DEFAULT_ALPHA)]
        alpha: f64,
        /// Number of hubs to remove.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = RankerChoice::Both)]
        ranker: RankerChoice,
    },
    /// IPR, power-law fit and degeneracy of the rankings.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = qrank_core::DEFAULT_ALPHA)]
        alpha: f64,
        /// Relative gap below which neighbouring scores share a class.
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = RankerChoice::Both)]
        ranker: RankerChoice,
    },
    /// Classical and average quantum ranks side by side.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = qrank_core::DEFAULT_ALPHA)]
        alpha: f64,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Seed of the scale-free generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Exactly one network source.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Edge list, or Pajek if the name ends in .net.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// `scalefree:N`, `hierarchical:GENERATION` or `tree:LEVELS`.
    #[arg(long = "gen")]
    pub generator: Option<String>,
    /// fig1a, fig1b, fig1c, fig1d or fig2b.
    #[arg(long)]
    pub benchmark: Option<String>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output path; stdout if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Number of two-steps averaged by the quantum ranker.
    #[arg(long, default_value_t = qrank_core::DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = BackendChoice::Auto)]
    pub backend: BackendChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RankerChoice {
    Classical,
    Quantum,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Direct,
    Spectral,
    Auto,
}

impl From<BackendChoice> for QuantumBackend {
    fn from(b: BackendChoice) -> Self {
        match b {
            BackendChoice::Direct => Self::Direct,
            BackendChoice::Spectral => Self::Spectral,
            BackendChoice::Auto => Self::Auto,
        }
    }
}
