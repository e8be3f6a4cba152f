//! `swipt` — command-line front end for the relay-link analysis library:
//! single-point metrics, parameter sweeps, figure-reproduction recipes,
//! Monte Carlo validation, and moment tables.

// Validation guards are written `!(x > 0.0)` rather than `x <= 0.0` on
// purpose: the negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod figures;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use swipt_core::metrics::EulerInversionParams;
use swipt_core::pipeline::{AnalysisOptions, PadeSelection};

use commands::Ctx;
use error::CliResult;

#[derive(Parser, Debug)]
#[command(
    name = "swipt",
    version,
    about = "Performance metrics for noncoherent dual-hop SWIPT relay links",
    after_help = "Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure, 4 I/O failure."
)]
struct Cli {
    /// Key=value configuration file; built-in defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Seed shared by all Monte Carlo runs.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Trial count for Monte Carlo runs.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    trials: u64,

    /// Output CSV file, or output directory for `figure`.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Fixed numerator order X of the [X/X+1] MGF approximant.
    #[arg(long, global = true, value_name = "X")]
    pade_order: Option<usize>,

    /// Laplace-inversion parameters as A,Q,N.
    #[arg(long, global = true, value_name = "A,Q,N", value_parser = parse_euler)]
    euler: Option<EulerInversionParams>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every metric at the configured operating point.
    Point {
        /// Append a Monte Carlo cross-check of outage and ASER.
        #[arg(long)]
        mc: bool,
    },
    /// Sweep one variable over a grid and emit per-point metrics as CSV.
    Sweep {
        /// Variable to sweep.
        #[arg(long, value_enum)]
        variable: SweepVariable,
        /// Grid as start:stop:step (stop inclusive).
        #[arg(long)]
        range: String,
    },
    /// Emit the plot-ready data behind a named figure.
    Figure {
        /// Recipe name, e.g. fig5-outage-vs-ratio.
        recipe: String,
    },
    /// Compare analytic outage, MGF, and ASER against Monte Carlo.
    Validate,
    /// Print moments of the end-to-end SNR.
    Moments {
        /// Highest moment order to print.
        #[arg(long, default_value_t = 8)]
        max_order: u32,
        /// Cross-check each closed form against direct quadrature.
        #[arg(long)]
        check: bool,
    },
}

/// Sweepable quantities; dB-valued ones are converted at this boundary only.
#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum SweepVariable {
    Theta,
    Beta,
    Eta,
    #[value(name = "snr_db")]
    SnrDb,
    #[value(alias = "M")]
    M,
    #[value(name = "gamma_th")]
    GammaTh,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Theta => "theta",
            SweepVariable::Beta => "beta",
            SweepVariable::Eta => "eta",
            SweepVariable::SnrDb => "snr_db",
            SweepVariable::M => "M",
            SweepVariable::GammaTh => "gamma_th",
        }
    }
}

fn parse_euler(text: &str) -> Result<EulerInversionParams, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected A,Q,N, got {text:?}"));
    }
    let a = parts[0].trim().parse::<f64>().map_err(|_| format!("bad A: {:?}", parts[0]))?;
    let q = parts[1].trim().parse::<u32>().map_err(|_| format!("bad Q: {:?}", parts[1]))?;
    let n = parts[2].trim().parse::<u32>().map_err(|_| format!("bad N: {:?}", parts[2]))?;
    Ok(EulerInversionParams { a, q, n })
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let run_cfg = config::load(cli.config.as_deref())?;
    let mut opts = AnalysisOptions::default();
    if let Some(x) = cli.pade_order {
        opts.pade = PadeSelection::Fixed(x);
    }
    if let Some(euler) = cli.euler {
        opts.euler = euler;
    }
    let ctx = Ctx { run: run_cfg, opts, seed: cli.seed, trials: cli.trials, out: cli.out };
    match cli.command {
        Command::Point { mc } => commands::run_point(&ctx, mc),
        Command::Sweep { variable, range } => commands::run_sweep(&ctx, variable, &range),
        Command::Figure { recipe } => figures::run_figure(&ctx, &recipe),
        Command::Validate => commands::run_validate(&ctx),
        Command::Moments { max_order, check } => commands::run_moments(&ctx, max_order, check),
    }
}
