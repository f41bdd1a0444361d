use std::process::ExitCode;

use clap::Parser;
use qudit_bell_cli::{format_table, run, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let is_verify = matches!(cli.command, Command::Verify { .. });
    match run(&cli) {
        Ok(report) => {
            if is_verify {
                eprint!("{}", format_table(&report));
            }
            println!("{}", report.to_json());
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let Some(report) = &err.report {
                eprint!("{}", format_table(report));
                println!("{}", report.to_json());
            }
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
