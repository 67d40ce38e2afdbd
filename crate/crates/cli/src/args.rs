use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "warpdens", version, about = "Shape-constrained density estimation by warped templates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a density to one column of samples.
    Fit(FitArgs),
    /// Fit the conditional density of y given x = x0 from two columns (x, y).
    Cfit(CfitArgs),
    /// Run a named benchmark, or `list` to show them.
    Bench(BenchArgs),
    /// Carry a template onto a named density with the constructive warp.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Number of modes.
    #[arg(long, conflicts_with = "shape")]
    pub modes: Option<usize>,
    /// Comma-separated monotone pieces, e.g. "inc,flat,dec".
    #[arg(long)]
    pub shape: Option<String>,
    /// Estimate boundary heights instead of pinning them to the floor.
    #[arg(long)]
    pub free_boundaries: bool,
}

#[derive(Debug, Args)]
pub struct TuningArgs {
    /// Template floor at pinned boundaries.
    #[arg(long, default_value_t = 1e-3)]
    pub omega: f64,
    #[arg(long, default_value_t = 2)]
    pub jmin: usize,
    #[arg(long, default_value_t = 10)]
    pub jmax: usize,
    /// Random starts per basis size.
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grid intervals on the unit interval.
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    /// Known support "A,B" instead of estimating it.
    #[arg(long, allow_hyphen_values = true)]
    pub support: Option<String>,
    /// Run restarts on one thread.
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// JSON result path; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write the curve as "x,p" CSV.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Curve points; defaults to one per grid node.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CfitArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Covariate location; the median of x when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Fraction of nearest covariates given positive weight.
    #[arg(long, default_value_t = 0.5)]
    pub frac: f64,
    /// Fixed kernel bandwidth instead of the adaptive rule.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Benchmark name, or `list`.
    pub name: String,
    /// Sample size; every registered size when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 20, conflicts_with = "full")]
    pub reps: usize,
    /// Use 100 replicates.
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Per-replicate CSV path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Summary JSON path; standard output when omitted.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Record wall-clock times (makes outputs run-dependent).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Density name.
    pub name: String,
    /// Override the density's own shape.
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
