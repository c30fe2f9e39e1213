//! Command-line reports for travel-time reliability valuation.
//!
//! Every run writes a JSON envelope (and optionally a flat CSV) named after
//! the command, plus figure-data CSVs for `routes`, `tradeoff` and `verify`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod report;
pub mod sources;

use std::path::PathBuf;

pub use args::Cli;
pub use error::{CliError, CliResult};

use config::RunConfig;
use report::{envelope, flatten_csv, to_json_text, write_file};

/// Runs one command and returns the files written. A numerical failure
/// detected after the computation (e.g. a residual above `--tol`) is
/// returned as an error once the report is on disk.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let (kind, args) = cli.command.split();
    let cfg = RunConfig::resolve(args)?;
    let outcome = commands::execute(kind, &cfg, args)?;
    let env = envelope(kind.as_str(), cfg.echo(), outcome.digest, outcome.results, &outcome.warnings);

    let mut written = Vec::new();
    if cfg.format.json() {
        written.push(write_file(&cfg.out, &format!("{}.json", kind.as_str()), &to_json_text(&env))?);
    }
    if cfg.format.csv() {
        written.push(write_file(&cfg.out, &format!("{}.csv", kind.as_str()), &flatten_csv(&env)?)?);
    }
    for (name, content) in &outcome.figures {
        written.push(write_file(&cfg.out, name, content)?);
    }
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(written),
    }
}
