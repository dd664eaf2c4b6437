//! `tilelab`: command-line access to the tiling toolkit. Every command prints
//! one JSON document (or a table with `--format table`) and exits 0 on
//! success, 1 on a domain, resource or input error, and 2 on a usage error.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use commands::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = commands::run(&cli);
    let elapsed = cli.timing.then(|| started.elapsed());
    let (text, ok) = output::render(result, cli.format, elapsed);
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
