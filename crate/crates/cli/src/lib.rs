//! Command-line harness for `ftconv`: data generation, end-to-end runs,
//! oracle verification, benchmarking and cost-model reports.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O or
//! malformed-file failure.

mod commands;
mod report;
mod settings;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{BenchReport, BenchRow, CostRow};
pub use settings::Settings;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ftconv", version, about = "FIR filter-bank convolution engine and accelerator cost model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Filter the input with every template and write the complex outputs.
    Conv,
    /// Build the spectral-power filter-output-plane.
    Fop,
    /// Compare every filter output against the double-precision oracle.
    Verify,
    /// Time one or more plans and report latency and GFLOPS.
    Bench,
    /// Theoretical latency and resource report per plan.
    Cost,
    /// Rank plans by theoretical latency.
    Sweep,
    /// Write a generated signal (`--input N`) or bank (`--filters M --taps K`).
    Gen,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Single-filter kernels at their measured clocks.
    Table3,
    /// Replicated power-output kernels over the full bank.
    Table4,
}

#[derive(Clone, Debug, Default, Args)]
pub struct Options {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Plan kind(s): naive-td, ola-td, naive-fd, aols, tols (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    pub plan: Vec<String>,
    /// Transform length for overlap-save plans.
    #[arg(long, global = true)]
    pub nft: Option<usize>,
    /// Transform points per cycle (4 or 8).
    #[arg(long, global = true)]
    pub pc: Option<usize>,
    /// Parallel taps K' of the time-domain kernels.
    #[arg(long, global = true)]
    pub kprime: Option<usize>,
    /// Filter replicas behind one shared forward transform.
    #[arg(long, global = true)]
    pub replicas: Option<usize>,
    /// Emit spectral power instead of complex outputs.
    #[arg(long, global = true)]
    pub power: bool,
    /// Devices the bank is partitioned over (cost model).
    #[arg(long, global = true)]
    pub devices: Option<usize>,
    /// Number of templates M.
    #[arg(long = "filters", global = true, value_name = "M")]
    pub filters: Option<usize>,
    /// Template length K.
    #[arg(long = "taps", global = true, value_name = "K")]
    pub taps: Option<usize>,
    /// Generated input length N.
    #[arg(long = "input", global = true, value_name = "N")]
    pub input: Option<usize>,
    /// Read the input from a .cf32 file.
    #[arg(long, global = true)]
    pub input_file: Option<PathBuf>,
    /// Read the templates from a .cf32 file (needs --taps).
    #[arg(long, global = true)]
    pub bank_file: Option<PathBuf>,
    /// Base seed for generated input and templates.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output file (data for conv/fop/gen, JSON report otherwise).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// CSV copy of the report or plane.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// JSON device model for cost and sweep.
    #[arg(long, global = true)]
    pub device_model: Option<PathBuf>,
    /// Kernel clock in MHz for cost and sweep.
    #[arg(long, global = true)]
    pub fmax: Option<f64>,
    /// Built-in kernel list for cost and sweep.
    #[arg(long, global = true)]
    pub preset: Option<Preset>,
    /// Timed repetitions per benchmark point.
    #[arg(long, global = true)]
    pub reps: Option<usize>,
    /// Benchmark every bank size 1..=M instead of M only.
    #[arg(long, global = true)]
    pub sweep_m: bool,
    /// Also compute rRMSE against the oracle while benchmarking.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Time budget in seconds for the required-performance figure.
    #[arg(long, global = true)]
    pub time_limit: Option<f64>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: EXIT_IO, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ftconv::Error> for CliError {
    fn from(e: ftconv::Error) -> Self {
        let code = match e {
            ftconv::Error::Io(_) | ftconv::Error::Malformed(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Runs a parsed command line, writing human-readable output to `out`.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> CliResult<()> {
    let settings = Settings::resolve(cli.command, &cli.opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.config.workers)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {} workers: {e}", settings.config.workers)))?;
    let mut buf = Vec::new();
    let result = pool.install(|| commands::dispatch(cli.command, &cli.opts, &settings, &mut buf));
    out.write_all(&buf)?;
    result
}
