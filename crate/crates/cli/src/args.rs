use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use runlattice_core::{OrderingKind, RunMode};

/// Analyze judged retrieval runs as finite lattices.
#[derive(Debug, Parser)]
#[command(name = "runlattice", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every run of the universe in canonical order.
    Enumerate,
    /// Emit the Hasse diagram (DOT or JSON).
    Hasse,
    /// Check a structural or metric property.
    Check {
        #[arg(value_enum)]
        what: CheckKind,
    },
    /// Write a run as the irredundant join of join-irreducibles.
    Decompose { run: String },
    /// Evaluate a metric directly on one run.
    Eval { run: String },
    /// Recompute a metric value from join-irreducible values only.
    Reconstruct { run: String },
    /// Metric values for the whole universe.
    Table,
    /// Universe and join-irreducible counts.
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Poset,
    Total,
    Distributive,
    Valuation,
}

#[derive(Debug, Default, Args)]
pub struct Options {
    /// Run mode.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Highest relevance degree (degrees are 0..=c).
    #[arg(long, global = true)]
    pub c: Option<usize>,
    /// Run length.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub ordering: Option<OrderingArg>,
    #[arg(long, global = true, value_enum)]
    pub metric: Option<MetricArg>,
    /// Recall base for gr (default: N).
    #[arg(long, global = true)]
    pub rb: Option<f64>,
    /// Persistence for grbp.
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Logarithm base for dcg.
    #[arg(long, global = true)]
    pub b: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Double the border of join-irreducible nodes.
    #[arg(long, global = true)]
    pub highlight_irreducibles: bool,
    /// JSON file mapping run literals (and "_bottom") to values.
    #[arg(long, global = true)]
    pub custom: Option<PathBuf>,
    /// Universe size limit.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Write data here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Set,
    Rank,
}

impl From<ModeArg> for RunMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Set => RunMode::SetBased,
            ModeArg::Rank => RunMode::RankBased,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    ProjReplSet,
    ReplSet,
    ProjReplRank,
    ReplRank,
    ReplSwapRank,
}

impl From<OrderingArg> for OrderingKind {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::ProjReplSet => OrderingKind::ProjReplSet,
            OrderingArg::ReplSet => OrderingKind::ReplSet,
            OrderingArg::ProjReplRank => OrderingKind::ProjReplRank,
            OrderingArg::ReplRank => OrderingKind::ReplRank,
            OrderingArg::ReplSwapRank => OrderingKind::ReplSwapRank,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Gp,
    Gr,
    Grbp,
    Dcg,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
            Format::Text => "text",
        }
    }
}
