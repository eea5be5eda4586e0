//! Command-line front end: outage sweeps, DMT curves, useful-rate tables and
//! the oracle suite. Every file written is paired with a `.manifest` that can
//! be fed back through `--config` to reproduce it.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod oracle;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

/// Runs the CLI on `argv` and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::expand_argv(argv) {
        Ok(a) => a,
        Err(e) => return report(&e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Outage(a) => commands::outage(a),
        Command::Dmt(a) => commands::dmt(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Rate(a) => commands::rate(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}
