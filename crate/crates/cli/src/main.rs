mod args;
mod commands;
mod failure;
mod io;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use failure::EXIT_USAGE;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Fit(a) => commands::fit_cmd(a),
        Command::Cfit(a) => commands::cfit_cmd(a),
        Command::Bench(a) => commands::bench_cmd(a),
        Command::Oracle(a) => commands::oracle_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("warpdens: {f}");
            ExitCode::from(f.code)
        }
    }
}
