//! `weyl`: command-line runner for the verification suites and divergence scans.
//!
//! Exit status: 0 when every checked property holds, 1 on a property failure,
//! 2 on a usage error, 3 when a numerical routine fails to converge.

use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;

use commands::{Failure, Status};

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::PropertyFailure) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
