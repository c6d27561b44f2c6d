//! Experiment runner and report generator for the shifted approximate
//! equality toolkit.
//!
//! Subcommands:
//!
//! * `quantum`   : run or exactly analyze the entangled simultaneous-message
//!   protocol over sampled instances,
//! * `classical` : run the shared-randomness sampling protocol,
//! * `verify`    : run the inequality verification suites,
//! * `rectangle` : exact bias and entropy-condition evaluation of input
//!   rectangles given in the instance text format,
//! * `sweep`     : cost (and optionally error) tables across n for both
//!   protocols.
//!
//! Every stochastic run takes `--seed`; trials draw from per-trial
//! streams of that seed, so outputs are byte-identical across runs and
//! across `--threads` settings. Reports never embed wall-clock times
//! (timing goes to stderr) for the same reason.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod report;

pub use report::format_f64;

/// Exit codes: 0 = success and all requested verifications hold,
/// 1 = run failure or a verification did not hold, 2 = usage error
/// (from clap), 3 = resource cap exceeded.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "shapeq",
    about = "Simulation and verification lab for shifted approximate equality protocols",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate the entangled simultaneous-message protocol.
    Quantum(commands::quantum::QuantumArgs),
    /// Run the classical sampling protocol.
    Classical(commands::classical::ClassicalArgs),
    /// Run the inequality verification suites.
    Verify(commands::verify::VerifyArgs),
    /// Evaluate rectangle bias and the entropy condition.
    Rectangle(commands::rectangle::RectangleArgs),
    /// Emit cost/error tables across n.
    Sweep(commands::sweep::SweepArgs),
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Master seed; mandatory for stochastic runs.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_parser = ["csv", "json"], default_value = "json")]
    pub format: String,

    /// Worker threads for trial execution (default: rayon's choice).
    #[arg(long)]
    pub threads: Option<usize>,

    /// JSON file with default parameter values; explicit flags override.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    pub fn want_csv(&self) -> bool {
        self.format == "csv"
    }

    pub fn build_pool(&self) -> Result<Option<rayon::ThreadPool>, String> {
        match self.threads {
            None => Ok(None),
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map(Some)
                .map_err(|e| format!("thread pool: {e}")),
        }
    }
}

/// Write the report body to `--out` or stdout.
pub fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("write {path:?}: {e}")),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| format!("stdout: {e}"))
        }
    }
}

fn exit_code_for(err: &shapeq_core::Error) -> i32 {
    match err {
        shapeq_core::Error::DimensionCap { .. } | shapeq_core::Error::SizeCap { .. } => {
            EXIT_RESOURCE
        }
        _ => EXIT_FAIL,
    }
}

/// Parse argv and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let started = std::time::Instant::now();
    let outcome = match cli.command {
        Command::Quantum(args) => commands::quantum::run(args),
        Command::Classical(args) => commands::classical::run(args),
        Command::Verify(args) => commands::verify::run(args),
        Command::Rectangle(args) => commands::rectangle::run(args),
        Command::Sweep(args) => commands::sweep::run(args),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(CommandError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CommandError::Core(err)) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
        Err(CommandError::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAIL
        }
    };
    eprintln!("elapsed: {} ms", started.elapsed().as_millis());
    code
}

/// Errors a subcommand can surface.
#[derive(Debug)]
pub enum CommandError {
    Usage(String),
    Core(shapeq_core::Error),
    Io(String),
}

impl From<shapeq_core::Error> for CommandError {
    fn from(e: shapeq_core::Error) -> Self {
        CommandError::Core(e)
    }
}

pub type CommandResult = Result<i32, CommandError>;
