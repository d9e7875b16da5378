//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schwarzschild_wb::config::{Averaging, FluxKind, Model, RightBoundary};
use schwarzschild_wb::experiments::Tier;

#[derive(Debug, Parser)]
#[command(name = "wbsolve", version, about = "Well-balanced solvers for Burgers and Euler flows on a Schwarzschild background")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write snapshots.csv and result.json.
    Run(RunArgs),
    /// Evaluate the acceptance criteria of a tier and run its catalog cases.
    Suite(SuiteArgs),
    /// Mesh-refinement study on smooth data.
    Convergence(ConvergenceArgs),
    /// List the catalog test ids.
    List,
}

/// Overrides applied on top of a catalog case or configuration file.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long)]
    pub model: Option<Model>,
    #[arg(long)]
    pub order: Option<u8>,
    /// Use the well-balanced scheme (default).
    #[arg(long, overrides_with = "no_wb")]
    pub wb: bool,
    /// Use the standard scheme.
    #[arg(long = "no-wb", overrides_with = "wb")]
    pub no_wb: bool,
    #[arg(long)]
    pub flux: Option<FluxKind>,
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub averaging: Option<Averaging>,
    #[arg(long = "right-bc")]
    pub right_bc: Option<RightBoundary>,
    /// Snapshot cadence in time units.
    #[arg(long = "output-interval")]
    pub output_interval: Option<f64>,
}

impl Overrides {
    pub fn well_balanced(&self) -> Option<bool> {
        match (self.wb, self.no_wb) {
            (_, true) => Some(false),
            (true, false) => Some(true),
            _ => None,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Catalog test id; defaults to the stationary smooth case of the model.
    #[arg(long)]
    pub test: Option<String>,
    /// TOML file of run-configuration keys layered over the case defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Amplitude of the perturbation family of testB8, testE7 or testE8.
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TierArg {
    Fast,
    Full,
    Slow,
}

impl From<TierArg> for Tier {
    fn from(t: TierArg) -> Self {
        match t {
            TierArg::Fast => Tier::Fast,
            TierArg::Full => Tier::Full,
            TierArg::Slow => Tier::Slow,
        }
    }
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, value_enum, default_value = "fast")]
    pub tier: TierArg,
    /// Output directory for suite_report.json and per-case snapshots.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Count documented known failures as failures.
    #[arg(long)]
    pub strict: bool,
    /// Run the preservation criteria with the standard scheme.
    #[arg(long = "no-wb")]
    pub no_wb: bool,
    /// Threshold file replacing the bundled one.
    #[arg(long)]
    pub thresholds: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub model: Model,
    #[arg(long)]
    pub order: u8,
    /// Comma-separated mesh sizes, each doubling the previous one.
    #[arg(long, value_delimiter = ',', default_values_t = [128usize, 256, 512])]
    pub meshes: Vec<usize>,
    #[arg(long = "reference-cells", default_value_t = 4096)]
    pub reference_cells: usize,
    /// Output directory for convergence.json.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}
