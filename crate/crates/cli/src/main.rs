//! `entangle`: entanglement criteria and collective Bell tests from the command line.
//!
//! Exit status is 0 on success, 1 for invalid input and 2 for numerical
//! failures such as a postselection that never succeeds.

mod args;
mod commands;

use std::fmt::Display;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format, OutputArgs};

#[derive(Debug)]
pub struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 1 }
    }

    pub fn output(e: impl Display) -> Self {
        Self::input(format!("cannot write output: {e}"))
    }
}

impl From<entangle_core::Error> for Failure {
    fn from(e: entangle_core::Error) -> Self {
        Self { code: if e.is_numerical() { 2 } else { 1 }, message: e.to_string() }
    }
}

fn emit(text: &str, out: &OutputArgs) -> Result<(), Failure> {
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::output(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let fmt = |o: &OutputArgs, default| o.format.unwrap_or(default);
    match &cli.command {
        Command::Ppt(c) => {
            emit(&commands::ppt(&commands::load_state(&c.source)?, fmt(&c.output, Format::Text))?, &c.output)
        }
        Command::Entropy(c) => {
            emit(&commands::entropy(&commands::load_state(&c.source)?, fmt(&c.output, Format::Text))?, &c.output)
        }
        Command::Chsh(c) => {
            emit(&commands::chsh(&commands::load_state(&c.source)?, fmt(&c.output, Format::Text))?, &c.output)
        }
        Command::Collective(c) => {
            let state = commands::load_state(&c.source)?;
            emit(&commands::collective(c, &state, fmt(&c.output, Format::Text))?, &c.output)
        }
        Command::Scan(c) => emit(&commands::scan_cmd(c, fmt(&c.output, Format::Csv))?, &c.output),
        Command::Examples(o) => emit(&commands::examples(fmt(o, Format::Text))?, o),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
