//! Command-line front end for the correlation-tensor separability toolkit:
//! threshold tables, (x, y) grid scans, dimension sweeps, and a seeded
//! self-verification run.

use clap::{Parser, Subcommand};
use std::process::ExitCode;

mod emit;
mod scan;
mod sweep;
mod thresholds;
mod verify;

#[derive(Parser)]
#[command(
    name = "corrsep",
    version,
    about = "Correlation-tensor separability criteria for bipartite states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print detection thresholds for the isotropic family, with a
    /// numeric-bisection cross-check column
    Thresholds(thresholds::ThresholdsArgs),
    /// Evaluate the detection-threshold surface on an (x, y) grid and write
    /// it to a file
    Scan(scan::ScanArgs),
    /// Tabulate the gaps between named thresholds and the family minimum
    /// across dimension pairs
    Sweep(sweep::SweepArgs),
    /// Run the built-in self-checks and emit a JSON report
    Verify(verify::VerifyArgs),
}

/// Command failures, split by exit code: usage and I/O problems exit 1,
/// numerical breakdowns exit 2, failed self-checks exit 3.
pub enum Failure {
    Usage(String),
    Io(String),
    Numerical(String),
    Verification(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Numerical(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<corrsep::Error> for Failure {
    fn from(err: corrsep::Error) -> Self {
        match err {
            corrsep::Error::InvalidParameter { .. }
            | corrsep::Error::DimensionMismatch { .. }
            | corrsep::Error::UnorderedShape { .. } => Failure::Usage(err.to_string()),
            _ => Failure::Numerical(err.to_string()),
        }
    }
}

/// Resolves the worker-thread count: the flag wins, then CORRSEP_PARALLELISM,
/// then rayon's own default (no dedicated pool).
pub fn thread_pool(flag: Option<usize>) -> Result<Option<rayon::ThreadPool>, Failure> {
    let requested = match flag {
        Some(n) => Some(n),
        None => match std::env::var("CORRSEP_PARALLELISM") {
            Ok(raw) => Some(raw.trim().parse::<usize>().map_err(|_| {
                Failure::Usage(format!(
                    "CORRSEP_PARALLELISM must be a positive integer, got {raw:?}"
                ))
            })?),
            Err(std::env::VarError::NotPresent) => None,
            Err(err) => return Err(Failure::Usage(format!("CORRSEP_PARALLELISM: {err}"))),
        },
    };
    match requested {
        None => Ok(None),
        Some(0) => Err(Failure::Usage("parallelism must be at least 1".to_string())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(Some)
            .map_err(|err| Failure::Numerical(format!("thread pool: {err}"))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Thresholds(args) => thresholds::run(args),
        Command::Scan(args) => scan::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Verify(args) => verify::run(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
