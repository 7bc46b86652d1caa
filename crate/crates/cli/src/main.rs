mod args;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use micromaser_core::sweep::{compare_csv, oracle_report_text, sweep_csv};
use micromaser_core::{run_compare, run_oracle_check, run_sweep, Error};

use args::{Cli, Command};

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_ORACLE_FAILED: u8 = 3;

enum Failure {
    Core(Error),
    Io(io::Error),
    OracleFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep(args) => {
            let rows = run_sweep(&args.config()?)?;
            emit(args.common.out.as_deref(), &sweep_csv(&rows))?;
        }
        Command::Compare(args) => {
            let (a, b) = args.configs()?;
            let cmp = run_compare(&a, &b)?;
            emit(args.common.out.as_deref(), &compare_csv(&cmp))?;
        }
        Command::OracleCheck(args) => {
            let report = run_oracle_check(&args.config()?)?;
            let text = oracle_report_text(&report);
            emit(args.common.out.as_deref(), &text)?;
            if !report.passed {
                return Err(Failure::OracleFailed);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() {
                EXIT_CONFIG
            } else {
                EXIT_NUMERICAL
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::OracleFailed) => {
            eprintln!("error: oracle check failed");
            ExitCode::from(EXIT_ORACLE_FAILED)
        }
    }
}
