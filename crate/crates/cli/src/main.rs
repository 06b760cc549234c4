//! `ata`: stream vectors through anytime tail averagers, reproduce the
//! regression benchmark, or dump per-sample weight traces. All output is CSV.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use ata_core::WindowSchedule;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "ata", version, about = "Anytime tail averaging")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stream a file of vectors (one per line) through an averager.
    Average(AverageArgs),
    /// Run the stochastic linear regression benchmark.
    Experiment(ExperimentArgs),
    /// Dump the weight each past sample receives at every step.
    Trace(TraceArgs),
}

#[derive(Debug, Args, Clone, Copy)]
pub struct WindowArgs {
    /// Constant window size.
    #[arg(long, conflicts_with = "c")]
    pub k: Option<u64>,
    /// Proportional window fraction, window = ceil(c t).
    #[arg(long)]
    pub c: Option<f64>,
}

impl WindowArgs {
    pub fn schedule(&self) -> Result<Option<WindowSchedule>> {
        Ok(match (self.k, self.c) {
            (Some(k), None) => Some(WindowSchedule::constant(k)?),
            (None, Some(c)) => Some(WindowSchedule::proportional(c)?),
            (None, None) => None,
            (Some(_), Some(_)) => bail!("--k and --c are mutually exclusive"),
        })
    }

    pub fn required(&self) -> Result<WindowSchedule> {
        match self.schedule()? {
            Some(s) => Ok(s),
            None => bail!("one of --k or --c is required"),
        }
    }
}

#[derive(Debug, Args)]
pub struct AverageArgs {
    /// Input file, one vector per line (comma or whitespace separated); `-` for stdin.
    pub input: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Averager name: true, raw, exp, expk, awa, awa3, awak, truek.
    #[arg(long = "averager", alias = "averagers", default_value = "awa")]
    pub averager: String,
    /// Recent accumulators for `awa`.
    #[arg(long, default_value_t = 1)]
    pub z: usize,
    /// Horizon used by `raw` and by `true` with --c; defaults to the input length.
    #[arg(long)]
    pub steps: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Run a single schedule; without --k/--c the four standard settings run
    /// (k = 10, 100 and c = 0.25, 0.5).
    #[command(flatten)]
    pub window: WindowArgs,
    /// Comma-separated averager roster; defaults depend on the schedule.
    #[arg(long, value_delimiter = ',')]
    pub averagers: Option<Vec<String>>,
    #[arg(long, default_value_t = 1)]
    pub z: usize,
    /// Number of SGD batches.
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    #[arg(long, default_value_t = 0.05)]
    pub stepsize: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Also write every run's curves to `<name>_runs.csv`.
    #[arg(long)]
    pub per_run: bool,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long = "averager", alias = "averagers", default_value = "awa")]
    pub averager: String,
    #[arg(long, default_value_t = 1)]
    pub z: usize,
    /// Stream length to trace (at most 10000).
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Average(args) => commands::average(&args),
        Command::Experiment(args) => commands::experiment(&args),
        Command::Trace(args) => commands::trace(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
