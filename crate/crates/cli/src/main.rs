//! `ncgeom` command-line driver.

mod config;
mod converge;
mod encode;
mod fields;
mod output;
mod star;
mod validate;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, Settings};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match Settings::load(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Validate(a) => validate::run(&settings, a),
        Command::Star(a) => star::run(a),
        Command::Converge(a) => converge::run(&settings, a),
        Command::Encode(a) => encode::run(&settings, a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
