mod args;
mod commands;
mod error;
mod render;
mod suite;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;
use crate::render::Status;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.config.workers)
        .build()
    {
        Ok(p) => p,
        Err(e) => return fail(&CliError::from(e)),
    };
    let result = pool.install(|| commands::run(&cli.command, &cli.config));
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match result {
        Ok(report) => {
            if let Err(e) = report
                .write(cli.config.format, &mut out)
                .and_then(|_| out.flush())
            {
                return fail(&CliError::from(e));
            }
            if cli.config.verify {
                eprintln!("verification passed");
            }
            match report.status {
                Status::Done => ExitCode::SUCCESS,
                Status::Unresolved => {
                    eprintln!("some items are unresolved at this budget");
                    ExitCode::from(2)
                }
            }
        }
        Err(CliError::SuiteFailed(report)) => {
            let _ = report.write(cli.config.format, &mut out);
            let _ = out.flush();
            fail(&CliError::SuiteFailed(report))
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}
