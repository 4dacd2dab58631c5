use std::process::ExitCode;

use clap::Parser;
use superq_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", render(&outcome.report, cli.global.format));
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("superq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
