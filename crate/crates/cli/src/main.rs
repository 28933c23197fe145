use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gkf_core::Basis;

mod commands;
mod descriptor;
mod error;
mod report;

use error::CliError;
use report::{Document, Format};

/// Exact tables, predictions and Monte Carlo checks for the Gaussian
/// kinematic formula and its spherical approximations.
#[derive(Debug, Parser)]
#[command(name = "gkf", version)]
struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Master seed for random streams; GKF_SEED takes precedence.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,

    /// Worker threads for Monte Carlo. Results do not depend on it.
    #[arg(long, default_value_t = 1, global = true)]
    workers: usize,

    /// Record wall time in the report (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    /// volumes of unit balls ω_n
    Omega,
    /// surface areas α_n = (n+1) ω_{n+1}
    Alpha,
    /// intrinsic volumes μ_k of the unit ball B^n
    Mu,
    /// Gaussian kinematic coefficients (π/2)^{k/2}/(k! ω_k)
    Gkf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergeKind {
    /// ν_k(D_N) against its Gaussian limit
    Nu,
    /// projections of the uniform law on Σ^N against the standard Gaussian
    Poincare,
    /// the same estimand under Π_N for each N and under Π_∞
    Pin,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Exact constant tables.
    Tables {
        #[arg(long, value_enum)]
        what: TableKind,
        /// largest index
        #[arg(long, default_value_t = 10)]
        max: usize,
        /// ball dimension for `--what mu` (defaults to --max)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Change basis of a valuation on Σ^N.
    Convert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        from: Basis,
        #[arg(long)]
        to: Basis,
        /// N+1 comma-separated rationals, e.g. `1,0,-1/2`
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coeffs: Vec<String>,
    },
    /// The ν table of Σ^N, or ν_k of the spherical counterpart of a Gaussian set.
    Nu {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k_max: Option<usize>,
        /// Gaussian set D; reports ν_k(D_N)
        #[arg(long)]
        set: Option<String>,
    },
    /// Predicted E L_m(A ∩ F^{-1} D).
    Predict {
        /// set on the unit sphere
        #[arg(long = "a", visible_alias = "A")]
        a: String,
        /// Gaussian set
        #[arg(long = "d", visible_alias = "D")]
        d: String,
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// predict under Π_N instead of the Gaussian law
        #[arg(long)]
        big_n: Option<usize>,
    },
    /// Monte Carlo estimate of E L_m(A ∩ F^{-1} D) against its prediction.
    Simulate {
        #[arg(long = "a", visible_alias = "A")]
        a: String,
        #[arg(long = "d", visible_alias = "D")]
        d: String,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        big_n: Option<usize>,
        /// points on A per draw, for volume estimands
        #[arg(long, default_value_t = 1)]
        points: usize,
    },
    /// Convergence sweeps over N.
    Converge {
        #[arg(long, value_enum)]
        kind: ConvergeKind,
        #[arg(long = "a", visible_alias = "A")]
        a: Option<String>,
        #[arg(long = "d", visible_alias = "D")]
        d: Option<String>,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        /// projection dimension for `--kind poincare`
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, value_delimiter = ',', default_value = "50,200,1000")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Exact identity suite; exits 1 if anything fails.
    Check {
        /// largest N for the exhaustive exact checks
        #[arg(long, default_value_t = 20)]
        max_n: usize,
    },
}

/// Run settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub seed: u64,
    pub workers: usize,
}

/// Tables plus whether a statistical or exact check failed.
pub struct Outcome {
    pub tables: Vec<report::Table>,
    pub failed: bool,
}

fn effective_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var("GKF_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Argument(format!("GKF_SEED = `{v}` is not a u64"))),
        Err(std::env::VarError::NotPresent) => Ok(flag),
        Err(e) => Err(CliError::Argument(format!("GKF_SEED: {e}"))),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let seed = effective_seed(cli.seed)?;
    if cli.workers == 0 {
        return Err(CliError::Argument("--workers must be at least 1".into()));
    }
    let config = RunConfig { seed, workers: cli.workers };
    let outcome = commands::dispatch(&cli.command, &config)?;
    let doc = Document {
        command: serde_json::to_value(&cli.command).map_err(|e| CliError::Output(e.to_string()))?,
        tables: outcome.tables,
        seed: Some(seed),
        wall_time: cli.timing.then(|| start.elapsed().as_secs_f64()),
    };
    let text = doc.render(cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(outcome.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
