use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rspsim", version, about = "Remote state preparation simulator and resource calculator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one protocol for one target qubit.
    Run(RunArgs),
    /// Analytic vs simulated fidelity over a theta grid (CSV).
    Sweep(SweepArgs),
    /// Channel counts from the closed-form depth formulas.
    Resources(ResourcesArgs),
    /// Greedy channel compression plan.
    Compress(CompressArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Explicit,
    Improved1,
    #[value(name = "appendixB", alias = "appendixb")]
    AppendixB,
    Improved2,
    Ghz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    PerHalf,
    LowerOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "appendixA", alias = "appendixa")]
    AppendixA,
    Improved1,
    #[value(name = "appendixB", alias = "appendixb")]
    AppendixB,
}

/// How deep the schedule goes. At most one may be given.
#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
pub struct DepthArgs {
    /// Schedule depth N.
    #[arg(long, visible_alias = "N")]
    pub depth: Option<usize>,
    /// Accuracy exponent m; N = ceil of the accuracy-model depth.
    #[arg(long)]
    pub m: Option<u32>,
    /// Minimum fidelity (or success probability for appendixB); N = ceil of its depth formula.
    #[arg(long = "f-min")]
    pub f_min: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolArg,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Read theta and phi in degrees.
    #[arg(long)]
    pub degrees: bool,
    #[arg(long)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub depth: DepthArgs,
    /// Compression success probability (improved2).
    #[arg(long, visible_alias = "P")]
    pub p: Option<f64>,
    #[arg(long, value_enum, default_value_t = FamilyArg::PerHalf)]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = RunFormat::Text)]
    pub format: RunFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolArg,
    #[arg(long)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub depth: DepthArgs,
    #[arg(long, visible_alias = "P")]
    pub p: Option<f64>,
    #[arg(long, value_enum, default_value_t = FamilyArg::PerHalf)]
    pub family: FamilyArg,
    /// Number of theta points.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid: u64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResourcesArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long = "f-min")]
    pub f_min: Option<f64>,
    /// Comma-separated q values.
    #[arg(long, value_delimiter = ',', conflicts_with = "q_range")]
    pub q: Vec<f64>,
    /// Evenly spaced q values, `LO:HI`, with --samples points.
    #[arg(long = "q-range", value_name = "LO:HI")]
    pub q_range: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[arg(long)]
    pub q: f64,
    /// Deepest channel index N.
    #[arg(long, visible_alias = "N", conflicts_with = "m")]
    pub n: Option<usize>,
    /// Accuracy exponent m; N = ceil of the accuracy-model depth.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, visible_alias = "P")]
    pub p: f64,
    /// Fail when a head's filter floor exceeds P.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
