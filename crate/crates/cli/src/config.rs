use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use spheregrid::equistats::{CapFamily, Mode};
use spheregrid::sphere::{check_odd_prime, MAX_DIM, MIN_DIM};
use spheregrid::Budget;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Orbit,
    Raw,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Orbit => Mode::Orbit,
            ModeArg::Raw => Mode::Raw,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Ambient dimension.
    #[arg(long = "d")]
    pub d: Option<usize>,

    /// Squared radius.
    #[arg(long = "D")]
    pub norm: Option<u64>,

    /// Comma-separated squared radii; `a..b` denotes an inclusive range.
    #[arg(long = "D-seq")]
    pub norm_seq: Option<String>,

    /// Odd primes for genus checks, comma-separated or repeated.
    #[arg(long = "p", value_delimiter = ',')]
    pub p: Vec<u64>,

    #[arg(long, value_enum, default_value_t = ModeArg::Orbit)]
    pub mode: ModeArg,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Seed of the random cap family.
    #[arg(long, default_value_t = CapFamily::DEFAULT_SEED)]
    pub seed: u64,

    /// Number of random caps.
    #[arg(long, default_value_t = CapFamily::DEFAULT_SIZE)]
    pub caps: usize,

    /// Largest admissible enumeration cost estimate.
    #[arg(long)]
    pub budget: Option<f64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// CSV produced by an earlier subcommand, used instead of enumerating.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

/// Everything that determines an artifact. Embedded in every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub version: String,
    pub d: Option<usize>,
    #[serde(rename = "D")]
    pub norms: Vec<u64>,
    pub p: Vec<u64>,
    pub mode: ModeArg,
    pub seed: u64,
    pub caps: usize,
    pub budget: f64,
    pub format: Format,
    pub input: Option<String>,
    pub out: Option<String>,
}

impl RunConfig {
    pub fn from_args(
        command: &str,
        args: &CommonArgs,
        default_format: Format,
    ) -> Result<Self, CliError> {
        let mut norms = Vec::new();
        if let Some(n) = args.norm {
            norms.push(n);
        }
        if let Some(seq) = &args.norm_seq {
            norms.extend(parse_norm_seq(seq)?);
        }
        if args.input.is_none() {
            let d = args.d.ok_or_else(|| CliError::config("--d is required"))?;
            if !(MIN_DIM..=MAX_DIM).contains(&d) {
                return Err(CliError::config(format!(
                    "--d must lie in {MIN_DIM}..={MAX_DIM}"
                )));
            }
            if norms.is_empty() {
                return Err(CliError::config("one of --D or --D-seq is required"));
            }
        }
        if norms.contains(&0) {
            return Err(CliError::config("squared radii must be positive"));
        }
        for &p in &args.p {
            check_odd_prime(p).map_err(|e| CliError::config(e.to_string()))?;
        }
        let budget = args.budget.unwrap_or(Budget::default().limit);
        if budget.is_nan() || budget <= 0.0 {
            return Err(CliError::config("--budget must be positive"));
        }
        if args.caps == 0 {
            return Err(CliError::config("--caps must be positive"));
        }
        Ok(Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            d: args.d,
            norms,
            p: args.p.clone(),
            mode: args.mode,
            seed: args.seed,
            caps: args.caps,
            budget,
            format: args.format.unwrap_or(default_format),
            input: args.input.as_ref().map(|p| p.display().to_string()),
            out: args.out.as_ref().map(|p| p.display().to_string()),
        })
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.budget)
    }
}

/// Parses `101,1009` and `100..200` (inclusive) and mixtures of both.
pub fn parse_norm_seq(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::config(format!("cannot parse --D-seq {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}
