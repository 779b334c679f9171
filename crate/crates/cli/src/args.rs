use std::path::PathBuf;

use cftp_coloring::{GraphFormat, MasterSeed};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cftp-coloring",
    version,
    about = "Perfectly uniform proper k-colorings for k > 3Δ"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw one or more perfect samples.
    Sample(SampleArgs),
    /// Goodness-of-fit and coalescence report for one instance.
    Verify(VerifyArgs),
    /// Exact comparison of every update's marginal with the Glauber law along a scripted trace.
    OracleCheck(OracleArgs),
    /// Count proper colorings by exhaustive search.
    Enumerate(EnumerateArgs),
    /// Wall-time table over a grid of random bounded-degree graphs.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Instance {
    /// Graph file (DIMACS `.col` or a 1-based edge list).
    #[arg(long)]
    pub graph: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long)]
    pub format: Option<GraphFormat>,
    /// Number of colors.
    #[arg(long)]
    pub k: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Master seed (decimal or 0x-hex). Drawn from the OS and echoed when omitted.
    #[arg(long)]
    pub seed: Option<MasterSeed>,
    /// Number of samples; sample i uses the i-th derived seed when n > 1.
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Write every generated update as a JSON line to standard error.
    #[arg(long)]
    pub trace: bool,
    /// Serialize non-coalesced blocks to this directory.
    #[arg(long)]
    pub spill: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long)]
    pub seed: Option<MasterSeed>,
    /// Perfect samples for the χ² test; 0 skips it.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    /// Trials for the coalescence statistics; 0 skips them.
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Write the drift profile as CSV.
    #[arg(long)]
    pub drift_csv: Option<PathBuf>,
    /// Bins with fewer observations are reported but not judged.
    #[arg(long, default_value_t = 100)]
    pub min_bin: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long)]
    pub seed: Option<MasterSeed>,
    /// Length of the scripted trace.
    #[arg(long, default_value_t = 50)]
    pub updates: usize,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Also print every coloring, one JSON array per line.
    #[arg(long)]
    pub list: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Time this graph instead of the random grid (requires --k).
    #[arg(long, requires = "k")]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<GraphFormat>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400, 800])]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [4, 8])]
    pub degrees: Vec<u32>,
    /// Seeds per grid cell.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[arg(long)]
    pub seed: Option<MasterSeed>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}
