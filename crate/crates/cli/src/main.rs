//! `wbsolve`: run single simulations, the acceptance suite or a
//! convergence study.

use std::process::ExitCode;

use clap::Parser;
use wbsolve::args::{Cli, Command};
use wbsolve::commands;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => commands::cmd_run(args).map(|()| true),
        Command::Suite(args) => commands::cmd_suite(args),
        Command::Convergence(args) => commands::cmd_convergence(args).map(|()| true),
        Command::List => {
            commands::cmd_list();
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
