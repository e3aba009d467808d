use std::process::ExitCode;

use clap::Parser;
use discrep::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("discrep: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
