//! Subcommands of the `spheregrid` binary. Each one turns a [`RunConfig`]
//! into a single CSV or JSON artifact.

pub mod artifact;
pub mod commands;
pub mod config;
mod input;

use std::fmt;

use clap::{Parser, Subcommand};

pub use config::{CommonArgs, Format, ModeArg, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVARIANT,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<spheregrid::Error> for CliError {
    fn from(e: spheregrid::Error) -> Self {
        use spheregrid::Error as E;
        let code = match e {
            E::BudgetExceeded { .. } => EXIT_BUDGET,
            E::Invariant(_) | E::Overflow(_) | E::NotSpecialOrthogonal => EXIT_INVARIANT,
            _ => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::config(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::config(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spheregrid",
    version,
    about = "Shapes and grids of orthogonal lattices of integer points on spheres"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the primitive points of the sphere with their Γ₁-orbit data.
    Enumerate(CommonArgs),
    /// Canonical Gram matrix of the orthogonal lattice of every point.
    Shapes(CommonArgs),
    /// Shape plus marked point on the torus for every point.
    Grids(CommonArgs),
    /// Hasse invariants and isotropy of the orthogonal lattices at the given primes.
    GenusCheck(CommonArgs),
    /// Equidistribution statistics for each squared radius.
    Stats(CommonArgs),
    /// Statistics over a sequence of radii with a trend verdict.
    Report(CommonArgs),
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Enumerate(a) => commands::enumerate(a),
        Command::Shapes(a) => commands::classes(a, false),
        Command::Grids(a) => commands::classes(a, true),
        Command::GenusCheck(a) => commands::genus_check(a),
        Command::Stats(a) => commands::stats(a),
        Command::Report(a) => commands::report(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
