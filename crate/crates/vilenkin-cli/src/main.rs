//! Command-line front end for the harmonic-analysis library: evaluates
//! summability kernels, runs the verification suites, and produces
//! seed-reproducible experiment tables as CSV or JSON.
//!
//! Exit codes: 0 on success, 1 on computation or verification failure
//! (with the first failing witness on standard error), 2 on argument
//! errors.  `VILENKIN_THREADS` caps the worker pool used for parameter
//! grids; output bytes do not depend on it.

mod experiment;
mod kernel;
mod output;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "vilenkin",
    version,
    about = "Kernels, verification suites, and experiments on bounded Vilenkin groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a summability kernel and write its cell values.
    Kernel(kernel::KernelArgs),
    /// Run a verification suite; exits 0 only if every check passes.
    Verify(verify::VerifyArgs),
    /// Run a seeded experiment and write its table.
    Experiment(experiment::ExperimentArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match cli.command {
        Command::Kernel(args) => kernel::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Experiment(args) => experiment::run(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("VILENKIN_THREADS") {
        if let Ok(threads) = raw.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}
