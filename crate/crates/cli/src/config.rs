use crate::CliError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sparsegeom::ann::{AnnConfig, Backend};
use sparsegeom::DEFAULT_STRUCTURE_BUDGET;
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "sparsegeom", version, about = "Nearest induced flat, simplex and segment queries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file for JSON Lines records (stdout if absent).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Report build_ms and query_ms as null so repeated runs compare equal.
    #[arg(long, global = true)]
    pub no_timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one structure over --input and answer every row of --queries.
    Query(QueryArgs),
    /// Compare a variant against the exhaustive oracle on random instances.
    OracleCheck(OracleArgs),
    /// Time queries over a grid of input sizes.
    Bench(BenchArgs),
    /// Run one of the lower-bound reductions.
    #[command(subcommand)]
    Reduce(ReduceCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CliVariant {
    Slr,
    Anlf,
    Anif,
    Anis,
    Segment,
    SegmentOffline,
}

impl fmt::Display for CliVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

impl CliVariant {
    /// Worst allowed ratio of reported to exact distance.
    pub fn bound(self, epsilon: f64) -> f64 {
        match self {
            CliVariant::Slr => 1.0,
            CliVariant::Anlf | CliVariant::Anif | CliVariant::Segment => 1.0 + epsilon,
            CliVariant::Anis => 1.0 + 2.0 * epsilon,
            CliVariant::SegmentOffline => 2.0 * (1.0 + epsilon),
        }
    }

    fn k_range(self) -> (usize, usize) {
        match self {
            CliVariant::Slr => (1, 6),
            CliVariant::Anlf | CliVariant::Anif => (2, 6),
            CliVariant::Anis => (2, 5),
            CliVariant::Segment | CliVariant::SegmentOffline => (2, 2),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct IndexArgs {
    #[arg(long, value_enum)]
    pub variant: CliVariant,
    /// Number of points spanning each flat or simplex.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value = "exact")]
    pub backend: Backend,
    /// Refuse to build more than this many per-base structures.
    #[arg(long, default_value_t = DEFAULT_STRUCTURE_BUDGET)]
    pub budget_structures: u64,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub index: IndexArgs,
    /// Data points (CSV or JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Query points (CSV or JSON).
    #[arg(long)]
    pub queries: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub index: IndexArgs,
    /// Number of random instances, one query each.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Points per instance.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub index: IndexArgs,
    /// Comma-separated input sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400, 800])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Queries timed per input size.
    #[arg(long, default_value_t = 200)]
    pub queries_per_n: usize,
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    /// Search for k integers summing to zero through nearest simplex queries.
    Ksum(KsumArgs),
    /// Lift four vectors of R^4 to a pair in R^24 whose inner product is their determinant.
    Hopcroft(HopcroftArgs),
    /// Search for d+1 points on a common hyperplane.
    Degeneracy(DegeneracyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Anis,
    Anif,
}

#[derive(Debug, Args)]
pub struct KsumArgs {
    /// Integers, one per line or comma separated.
    #[arg(long, conflicts_with = "numbers")]
    pub input: Option<PathBuf>,
    /// Inline comma-separated integers.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub numbers: Option<Vec<i64>>,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value = "exact")]
    pub backend: Backend,
    #[arg(long, value_enum, default_value = "anis")]
    pub solver: SolverArg,
    /// Number of random lifts (defaults to 8 ceil(e^k)).
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_STRUCTURE_BUDGET)]
    pub budget_structures: u64,
}

#[derive(Debug, Args)]
pub struct HopcroftArgs {
    /// Four rows of four reals: the columns a, b, c, d.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct DegeneracyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value = "exact")]
    pub backend: Backend,
    /// Number of half-density samples (defaults to 8 ceil(log2 n)).
    #[arg(long)]
    pub samples: Option<usize>,
}

/// Validated settings shared by every structure-building command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub variant: CliVariant,
    pub k: usize,
    pub ann: AnnConfig,
    pub budget: u64,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(args: &IndexArgs, seed: u64) -> Result<Self, CliError> {
        let (lo, hi) = args.variant.k_range();
        if !(lo..=hi).contains(&args.k) {
            return Err(CliError::Config(format!("--k {} outside {lo}..={hi} for {}", args.k, args.variant)));
        }
        if matches!(args.variant, CliVariant::Segment) && args.epsilon > 1.0 {
            return Err(CliError::Config(format!("--epsilon {} above 1 for segment", args.epsilon)));
        }
        let ann = AnnConfig::new(args.epsilon, args.backend)?;
        Ok(Self {
            variant: args.variant,
            k: args.k,
            ann,
            budget: args.budget_structures,
            seed,
        })
    }
}
