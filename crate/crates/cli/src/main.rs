use std::process::ExitCode;

use clap::Parser;
use spapprox_cli::{execute, exit, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = execute(&cli);
    print!("{}", outcome.stdout);
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, outcome.report.to_json() + "\n") {
            eprintln!("error: cannot write report to {}: {e}", path.display());
            return ExitCode::from(exit::ERROR as u8);
        }
    }
    ExitCode::from(outcome.exit as u8)
}
