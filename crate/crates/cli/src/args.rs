use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ghom_core::checks::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "ghom", version, about = "Exact homology of étale groupoids from combinatorial data")]
pub struct Cli {
    /// Emit the machine-readable report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shifts of finite type.
    #[command(subcommand)]
    Sft(SftCommand),
    /// Bratteli diagrams and dimension groups.
    #[command(subcommand)]
    Af(AfCommand),
    /// Tower partitions.
    #[command(subcommand)]
    Towers(TowersCommand),
    /// Marker sets in ℤᴺ.
    #[command(subcommand)]
    Zn(ZnCommand),
    /// Property suites.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Matrix,
    Truncation,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum SftCommand {
    /// H₀ or H₁ from the matrix formula, the truncation tower, or both.
    Homology(SftHomologyArgs),
    /// Index of a tableau in H₁.
    Index(SftIndexArgs),
    /// Search for a tableau with a given index.
    FindIndex(SftFindArgs),
}

#[derive(Debug, Args)]
pub struct SftHomologyArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1))]
    pub degree: u32,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Deepest truncation level examined.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Clopen set whose degree-0 class is reported.
    #[arg(long)]
    pub clopen: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SftIndexArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub tableau: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct SftFindArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Target coordinates in the stable H₁, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub target: Vec<i64>,
    /// Maximum number of index evaluations.
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    #[arg(long, default_value_t = 3)]
    pub max_word_len: usize,
    #[arg(long, default_value_t = 8)]
    pub max_pairs: usize,
}

#[derive(Debug, Subcommand)]
pub enum AfCommand {
    /// Class of a clopen set, optionally compared with a second one.
    Class(AfClassArgs),
    /// Involution carrying one clopen set onto another of the same class.
    Transport(AfTransportArgs),
    /// Riesz interpolant of two lower and two upper bounds.
    Riesz(AfRieszArgs),
    /// Level-by-level H₁ check.
    H1check(AfH1Args),
}

#[derive(Debug, Args)]
pub struct AfClassArgs {
    #[arg(long)]
    pub diagram: PathBuf,
    #[arg(long)]
    pub clopen: PathBuf,
    /// Second clopen set to compare against.
    #[arg(long)]
    pub to: Option<PathBuf>,
    /// Number of levels to push before giving up.
    #[arg(long, default_value_t = 8)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct AfTransportArgs {
    #[arg(long)]
    pub diagram: PathBuf,
    #[arg(long)]
    pub from: PathBuf,
    #[arg(long)]
    pub to: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct AfRieszArgs {
    #[arg(long)]
    pub diagram: PathBuf,
    /// Document `{"f": [f1, f2], "g": [g1, g2]}`.
    #[arg(long)]
    pub elements: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct AfH1Args {
    #[arg(long)]
    pub diagram: PathBuf,
    /// Deepest level checked.
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
}

#[derive(Debug, Subcommand)]
pub enum TowersCommand {
    /// `match_subsets` with `--within`, otherwise `match_equal` with `--source`.
    Match(TowersMatchArgs),
    /// Stack extra floors on every class.
    Extend(TowersExtendArgs),
    /// Restrict to a full clopen set.
    Reduce(TowersReduceArgs),
}

#[derive(Debug, Args)]
pub struct TowersMatchArgs {
    #[arg(long)]
    pub towers: PathBuf,
    /// Range floor sets; repeat for several.
    #[arg(long = "range", required = true)]
    pub ranges: Vec<PathBuf>,
    #[arg(long, conflicts_with = "within")]
    pub source: Option<PathBuf>,
    #[arg(long)]
    pub within: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TowersExtendArgs {
    #[arg(long)]
    pub towers: PathBuf,
    /// `{class: height}` or `{class: [height per floor]}`.
    #[arg(long)]
    pub heights: PathBuf,
}

#[derive(Debug, Args)]
pub struct TowersReduceArgs {
    #[arg(long)]
    pub towers: PathBuf,
    #[arg(long)]
    pub clopen: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ZnCommand {
    /// Boundary ratios as CSV rows `m,n,N,ratio,bound`.
    Ratio(ZnRatioArgs),
    /// The bound alone.
    Bound(ZnBoundArgs),
}

#[derive(Debug, Args)]
pub struct ZnRatioArgs {
    #[arg(long = "N", default_value_t = 2)]
    pub dim: usize,
    /// Grid spacings, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long)]
    pub window: Option<u32>,
    /// Configuration document instead of grid flags.
    #[arg(long, conflicts_with_all = ["m", "window"])]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZnBoundArgs {
    #[arg(long = "N", default_value_t = 2)]
    pub dim: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// One of full-shift, oracle, designated, index, boundary, af-h1, hopf2, towers, zn, riesz, all.
    pub suite: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}
