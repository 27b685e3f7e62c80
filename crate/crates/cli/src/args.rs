use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "geodiscord", version, about = "Geometric discord and related correlation measures for bipartite states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for random state families and for the D_G optimizer restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Output format. Defaults to json for analyze/generate/selftest and csv for sweep.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute all measures for a density matrix given as matrix JSON.
    Analyze(AnalyzeArgs),
    /// Emit the matrix JSON of a state family member.
    Generate(GenerateArgs),
    /// Tabulate the measures over a one-parameter family.
    Sweep(SweepArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    /// Number of random restarts for the numeric D_G search (m > 2).
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,

    /// Do not compute D_G.
    #[arg(long)]
    pub skip_dg: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Matrix JSON file, or `-` for stdin.
    pub input: PathBuf,

    /// Exchange the two parties before analysis.
    #[arg(long)]
    pub swap_parties: bool,

    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    Werner,
    Isotropic,
    PureSchmidt,
    MaxEntangled,
    ClassicalQuantum,
    Product,
    RandomMixed,
    RandomPure,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// State spec JSON file (object with a `family` tag). Overrides the inline flags.
    #[arg(long, conflicts_with = "family")]
    pub spec: Option<PathBuf>,

    #[arg(long, value_enum, required_unless_present = "spec")]
    pub family: Option<Family>,

    #[arg(long)]
    pub m: Option<usize>,

    #[arg(long)]
    pub n: Option<usize>,

    /// Mixing parameter for werner and isotropic.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,

    /// Schmidt coefficients, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub s: Option<Vec<f64>>,

    /// Classical probabilities for classical_quantum, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,

    /// Rank for random_mixed.
    #[arg(long)]
    pub rank: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep spec JSON file. Overrides the inline flags.
    #[arg(long, conflicts_with = "family")]
    pub spec: Option<PathBuf>,

    #[arg(long, value_enum, required_unless_present = "spec")]
    pub family: Option<SweepFamily>,

    #[arg(long)]
    pub m: Option<usize>,

    /// Dimension of party B for pure_schmidt (defaults to m).
    #[arg(long)]
    pub n: Option<usize>,

    /// Swept parameter: `x` for werner/isotropic, `s1` for pure_schmidt.
    #[arg(long)]
    pub param: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub stop: Option<f64>,

    #[arg(long)]
    pub steps: Option<usize>,

    /// Columns to emit, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,

    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepFamily {
    Werner,
    Isotropic,
    PureSchmidt,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Reduced corpus sizes; same criteria and tolerances.
    #[arg(long)]
    pub quick: bool,

    /// Negative control: build the generators in a corrupted order.
    #[arg(long, hide = true)]
    pub corrupt_generator_ordering: bool,
}
