//! Flag surface and its resolution into the library's validated types.
//!
//! Flags mirror the simulation parameters by name (`--mu0`, `--dt`,
//! `--paths`, `--alpha`) so a reproduction command reads like the
//! experiment description. `FRACWIENER_SEED`, when set, overrides the
//! `--seed` flag; everything else is explicit.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracwiener::ensemble::{EnsembleConfig, Scheme, SchemeSet};
use fracwiener::fracpower::{Alpha, MuZero, SqrtRepMode};
use fracwiener::types::TimeGrid;

use crate::error::CliError;

pub const SEED_ENV_VAR: &str = "FRACWIENER_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "fracwiener",
    version,
    about = "Fractional powers of a simulated Wiener process: build them, \
             square them back, and check the driving noise reappears"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build each scheme on one driving path and write per-step series
    Simulate(SimulateArgs),
    /// Run the Monte Carlo ensemble and write mean paths and summaries
    Ensemble(EnsembleArgs),
    /// Run the invariant suite and print PASS/FAIL per check
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Master seed for the path generator (FRACWIENER_SEED overrides)
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Time steps per path
    #[arg(long, default_value_t = 256)]
    pub steps: usize,

    /// Step size; mutually exclusive with --t-max
    #[arg(long, conflicts_with = "t_max", allow_negative_numbers = true)]
    pub dt: Option<f64>,

    /// Total simulated time, split evenly across the steps
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t_max: f64,

    /// Scale factor of the square-root representation; requires |mu0| > 1/2
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    pub mu0: f64,

    /// Power exponent in (0, 2]
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,

    /// Scheme to build; repeat the flag for several (default: all)
    #[arg(long = "scheme", value_enum)]
    pub schemes: Vec<SchemeArg>,

    /// Directory the output files go to
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,

    /// Output format for per-step series
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Which path of the seeded family to simulate
    #[arg(long, default_value_t = 0)]
    pub path_index: u64,

    /// Where the square-root branch factors read their signs from
    #[arg(long, value_enum, default_value_t = ModeArg::Increment)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Number of Monte Carlo paths
    #[arg(long, default_value_t = 10_000)]
    pub paths: u64,

    /// Path whose square-root profile goes into the summary
    #[arg(long, default_value_t = 0)]
    pub profile_path_index: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Paths per statistical check
    #[arg(long, default_value_t = 200)]
    pub paths: u64,

    /// Previously emitted per-step CSV to re-parse and cross-check
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    /// Principal-branch power of each increment
    Direct,
    /// Closed-form square root with the mu0 scale
    Sqrtrep,
    /// Pauli-matrix lift that cancels the sign artifact
    Clifford,
}

impl From<SchemeArg> for Scheme {
    fn from(arg: SchemeArg) -> Self {
        match arg {
            SchemeArg::Direct => Scheme::DirectPower,
            SchemeArg::Sqrtrep => Scheme::SqrtRep,
            SchemeArg::Clifford => Scheme::Clifford,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Signs taken from the increments (the canonical construction)
    Increment,
    /// Signs taken from the path levels
    Level,
}

impl From<ModeArg> for SqrtRepMode {
    fn from(arg: ModeArg) -> Self {
        match arg {
            ModeArg::Increment => SqrtRepMode::IncrementBased,
            ModeArg::Level => SqrtRepMode::LevelBased,
        }
    }
}

/// Flags resolved into validated domain values.
#[derive(Debug, Clone)]
pub struct ResolvedCommon {
    pub seed: u64,
    pub grid: TimeGrid,
    pub mu0: MuZero,
    pub alpha: Alpha,
    pub schemes: SchemeSet,
    pub out_dir: PathBuf,
    pub format: FormatArg,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<ResolvedCommon, CliError> {
        let seed = match std::env::var(SEED_ENV_VAR) {
            Ok(raw) => raw.trim().parse::<u64>().map_err(|_| {
                CliError::Invalid(format!(
                    "{SEED_ENV_VAR} must be an unsigned 64-bit integer, got {raw:?}"
                ))
            })?,
            Err(std::env::VarError::NotPresent) => self.seed,
            Err(std::env::VarError::NotUnicode(_)) => {
                return Err(CliError::Invalid(format!(
                    "{SEED_ENV_VAR} is not valid unicode"
                )));
            }
        };

        let grid = match self.dt {
            Some(dt) => TimeGrid::from_dt(dt, self.steps)?,
            None => TimeGrid::new(self.t_max, self.steps)?,
        };

        let schemes = if self.schemes.is_empty() {
            SchemeSet::all()
        } else {
            let list: Vec<Scheme> = self.schemes.iter().map(|&s| s.into()).collect();
            SchemeSet::new(&list)?
        };

        Ok(ResolvedCommon {
            seed,
            grid,
            mu0: MuZero::new(self.mu0)?,
            alpha: Alpha::new(self.alpha)?,
            schemes,
            out_dir: self.out_dir.clone(),
            format: self.format,
        })
    }
}

impl ResolvedCommon {
    pub fn ensemble_config(&self, paths: u64) -> EnsembleConfig {
        EnsembleConfig {
            paths,
            grid: self.grid,
            mu0: self.mu0,
            alpha: self.alpha,
            master_seed: self.seed,
            schemes: self.schemes,
        }
    }
}
