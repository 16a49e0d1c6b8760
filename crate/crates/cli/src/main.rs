//! pslab: command-line front end of the pseudospectra laboratory.
//!
//! Exit codes: 0 success / all checks pass, 1 a mathematical check failed,
//! 2 malformed input, 3 output I/O failure.

mod commands;
mod config;
mod util;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pslab_core::Error;

#[derive(Parser)]
#[command(name = "pslab", version, about = "pseudospectra laboratory")]
struct Cli {
    /// JSON config file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Psi field on a grid, optionally extracting level sets.
    Field(commands::field::FieldArgs),
    /// Run inequality checkers or section-convergence studies.
    Check(commands::check::CheckArgs),
    /// Construct a nilpotent matrix realizing a chain of nested domains.
    Shapes(commands::shapes::ShapesArgs),
    /// Matrix-square-root oscillation scans and multiplier-growth tables.
    Oscillate(commands::oscillate::OscillateArgs),
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => 3,
        Error::Construction { .. } | Error::InfeasibleEpsilon { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(threads) = std::env::var("PSLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }

    let file_config = match config::FileConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let outcome = match cli.command {
        Command::Field(args) => commands::field::run(args, &file_config),
        Command::Check(args) => commands::check::run(args, &file_config),
        Command::Shapes(args) => commands::shapes::run(args, &file_config),
        Command::Oscillate(args) => commands::oscillate::run(args, &file_config),
    };

    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
