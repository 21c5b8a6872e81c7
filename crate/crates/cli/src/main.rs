mod args;
mod commands;
mod error;
mod output;
mod report;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build_global()
    {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(1);
    }
    match panic::catch_unwind(AssertUnwindSafe(|| commands::run(&cli))) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => report_error(&e),
        Err(_) => {
            eprintln!("error: internal failure (panic)");
            ExitCode::from(1)
        }
    }
}

fn report_error(e: &CliError) -> ExitCode {
    // a closed pipe downstream is not a failure of ours
    let pipe = match e {
        CliError::Io(io) => Some(io.kind()),
        CliError::Json(j) => j.io_error_kind(),
        CliError::Csv(c) => match c.kind() {
            csv::ErrorKind::Io(io) => Some(io.kind()),
            _ => None,
        },
        _ => None,
    };
    if pipe == Some(std::io::ErrorKind::BrokenPipe) {
        return ExitCode::SUCCESS;
    }
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}
