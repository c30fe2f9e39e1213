use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Dist, Format};

#[derive(Debug, Parser)]
#[command(name = "ttvar", version, about = "Value travel-time reliability from travel-time samples or analytic models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Fit,
    Measures,
    Value,
    Routes,
    Tradeoff,
    Verify,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Fit => "fit",
            CommandKind::Measures => "measures",
            CommandKind::Value => "value",
            CommandKind::Routes => "routes",
            CommandKind::Tradeoff => "tradeoff",
            CommandKind::Verify => "verify",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit lognormal and Burr XII models to a sample and pick one
    Fit(CommonArgs),
    /// Travel time budget, unreliability area, mean-excess travel time and departures
    Measures(CommonArgs),
    /// VOR, VOU, VOV, reliability and variability ratios with cross-checks
    Value(CommonArgs),
    /// Trip costs of several routes under the mean, TTB and METT scenarios
    Routes(CommonArgs),
    /// Excess travel time and variability ratio across punctuality requirements
    Tradeoff(CommonArgs),
    /// Derivative signs, curvature condition, Monte Carlo audit and condition sweep
    Verify(CommonArgs),
}

impl Command {
    pub fn split(&self) -> (CommandKind, &CommonArgs) {
        match self {
            Command::Fit(a) => (CommandKind::Fit, a),
            Command::Measures(a) => (CommandKind::Measures, a),
            Command::Value(a) => (CommandKind::Value, a),
            Command::Routes(a) => (CommandKind::Routes, a),
            Command::Tradeoff(a) => (CommandKind::Tradeoff, a),
            Command::Verify(a) => (CommandKind::Verify, a),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Value of travel time
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Early schedule-delay penalty
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Late schedule-delay penalty (alternative to --tau)
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Punctuality requirement (alternative to --gamma)
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Distribution fitted to sample files [default: auto]
    #[arg(long, value_enum)]
    pub dist: Option<Dist>,
    /// Relative tolerance for cross-check residuals [default: 1e-9]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for Monte Carlo draws [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Punctuality grid, start:stop:step or a comma list
    #[arg(long)]
    pub grid: Option<String>,
    /// Monte Carlo draws for verify [default: 1000000]
    #[arg(long)]
    pub draws: Option<usize>,
    /// Output directory [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report format [default: json]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Analytic model, optionally named: [NAME=]builtin:uniform,
    /// builtin:uniform:LO:HI, builtin:logn:XI:PSI, builtin:burr:C:K:SCALE,
    /// builtin:degenerate:V, builtin:dataset:NAME, builtin:route:N
    #[arg(long = "model")]
    pub models: Vec<String>,
    /// key=value settings file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Sample files: one value per line, or CSV with a travel_time column
    /// (routes also accepts one CSV with a column per route)
    pub inputs: Vec<PathBuf>,
}
