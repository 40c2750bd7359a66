//! The `landscape-lab` command line: one subcommand per analysis, each
//! writing its tables and a run manifest into `--out-dir`.

mod args;
mod commands;
mod error;
mod output;
mod report;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, CliResult};
use output::Output;

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code: 0 success, 1 failed analysis, 2 unusable input.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version land here too, with code 0
            let _ = e.print();
            return u8::try_from(e.exit_code()).unwrap_or(2);
        }
    };
    let command_line = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, command_line) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, command_line: Vec<String>) -> CliResult<()> {
    let g = &cli.global;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", g.threads)))?;
    let mut out = Output::new(&g.out_dir, g.format)?;
    let name = pool.install(|| -> CliResult<&str> {
        Ok(match &cli.command {
            Command::Sat2(a) => {
                commands::sat2::run(a, &mut out)?;
                "sat2"
            }
            Command::Tsp(a) => {
                commands::tsp::run(a, g.seed, &mut out)?;
                "tsp"
            }
            Command::Toy(a) => {
                commands::toy::run(a, &mut out)?;
                "toy"
            }
            Command::Benchmark(a) => {
                commands::descent::run_benchmark(a, &mut out)?;
                "benchmark"
            }
            Command::Descent(a) => {
                commands::descent::run_descent(a, &mut out)?;
                "descent"
            }
            Command::Rates(a) => {
                commands::rates::run(a, g.seed, &mut out)?;
                "rates"
            }
            Command::Simulate(a) => {
                commands::simulate::run(a, g.seed, &mut out)?;
                "simulate"
            }
        })
    })?;
    out.finish(name, command_line)
}
