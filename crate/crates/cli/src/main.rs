//! `dioph`: expansions, scans, sums, constructions, plans and density reports.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::*;
use config::{AlphaSource, Format, Overrides, RunConfig};
use error::{CliError, EXIT_OK};

#[derive(Parser, Debug)]
#[command(name = "dioph", version, about = "Certified Diophantine approximation experiments")]
struct Cli {
    /// `key=value` file with defaults for the options below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// pi, sqrt2, golden, cf-file:PATH or decimal-file:PATH.
    #[arg(long, global = true)]
    alpha: Option<AlphaSource>,
    #[arg(long, global = true)]
    start_bits: Option<u32>,
    /// Precision ceiling (default from DIOPH_MAX_BITS, else 4096).
    #[arg(long, global = true)]
    max_bits: Option<u32>,
    /// Target relative width for adaptive enclosures, e.g. 1e-15.
    #[arg(long, global = true)]
    target_rel_width: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (standard output by default).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction expansion of α.
    Cf {
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Good denominators up to a bound.
    Scan {
        #[arg(long)]
        mu: Option<String>,
        #[arg(long, default_value = "1/10")]
        eps1: String,
        /// Also run the growth check with this window exponent.
        #[arg(long)]
        eps2: Option<String>,
        #[arg(long, default_value_t = 1000)]
        qmax: u64,
        /// Evaluate every denominator instead of the convergent-based candidates.
        #[arg(long)]
        exhaustive: bool,
        /// Measure approximations of α instead of 1/α.
        #[arg(long)]
        direct: bool,
    },
    /// Certified partial sum of a series.
    Sum {
        /// flint-hills or sqrt2-lattice.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        /// abs-sin, lattice or table:PATH, with α from --alpha.
        #[arg(long, conflicts_with = "preset")]
        sine: Option<String>,
        #[arg(long)]
        b1: Option<String>,
        #[arg(long)]
        b2: Option<String>,
        #[arg(long = "N", default_value_t = 1000)]
        n: u64,
        /// Ledger file rewritten every --checkpoint-every terms.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = dioph::series::DEFAULT_CHECKPOINT_EVERY)]
        checkpoint_every: u64,
        /// Continue from a ledger file.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Also write every term enclosure to this CSV file.
        #[arg(long)]
        terms_csv: Option<PathBuf>,
        #[arg(long)]
        serial: bool,
    },
    /// Build a fast-growing expansion and check its terms at every convergent.
    Construct {
        #[arg(long, default_value = "3")]
        u: String,
        #[arg(long, default_value = "2")]
        v: String,
        #[arg(long, default_value = "1")]
        b2: String,
        #[arg(long, default_value_t = 6)]
        terms: usize,
        #[arg(long, default_value_t = dioph::contfrac::DEFAULT_DIGIT_BUDGET)]
        digit_budget: u64,
        /// Comma-separated leading quotients (default 0,1).
        #[arg(long)]
        prefix: Option<String>,
        /// Write the verification report as JSON here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Partition of the exponent range for a measure hypothesis.
    Plan {
        #[arg(long)]
        mu: String,
        #[arg(long, default_value = "3")]
        u: String,
        #[arg(long, default_value = "2")]
        v: String,
        #[arg(long, default_value = "1/2")]
        safety: String,
        /// Also report per-cell term sums for denominators up to this bound.
        #[arg(long)]
        cells: Option<u64>,
    },
    /// Growth, window counts and the close-pair audit of good denominators.
    Density {
        #[arg(long)]
        mu: Option<String>,
        #[arg(long, default_value = "1/10")]
        eps1: String,
        #[arg(long, default_value = "1/2")]
        eps2: String,
        #[arg(long, default_value_t = 10000)]
        qmax: u64,
        /// Ascending denominators, one per line, instead of a scan.
        #[arg(long)]
        sequence: Option<PathBuf>,
        #[arg(long)]
        direct: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&Overrides {
        config: cli.config,
        alpha: cli.alpha,
        start_bits: cli.start_bits,
        max_bits: cli.max_bits,
        target_rel_width: cli.target_rel_width,
        format: cli.format,
        out: cli.out,
        seed: cli.seed,
    })?;
    match cli.command {
        Command::Cf { terms } => cmd_cf(&cfg, terms),
        Command::Scan {
            mu,
            eps1,
            eps2,
            qmax,
            exhaustive,
            direct,
        } => cmd_scan(
            &cfg,
            &ScanArgs {
                mu,
                eps1,
                eps2,
                q_max: qmax,
                exhaustive,
                direct,
            },
        ),
        Command::Sum {
            preset,
            u,
            v,
            sine,
            b1,
            b2,
            n,
            checkpoint,
            checkpoint_every,
            resume,
            terms_csv,
            serial,
        } => cmd_sum(
            &cfg,
            &SumArgs {
                preset,
                u,
                v,
                sine,
                b1,
                b2,
                n,
                checkpoint,
                checkpoint_every,
                resume,
                terms_csv,
                serial,
            },
        ),
        Command::Construct {
            u,
            v,
            b2,
            terms,
            digit_budget,
            prefix,
            report,
        } => cmd_construct(
            &cfg,
            &ConstructArgs {
                u,
                v,
                b2,
                terms,
                digit_budget,
                prefix,
                report,
            },
        ),
        Command::Plan { mu, u, v, safety, cells } => cmd_plan(&cfg, &PlanArgs { mu, u, v, safety, cells }),
        Command::Density {
            mu,
            eps1,
            eps2,
            qmax,
            sequence,
            direct,
        } => cmd_density(
            &cfg,
            &DensityArgs {
                mu,
                eps1,
                eps2,
                q_max: qmax,
                sequence,
                direct,
            },
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
