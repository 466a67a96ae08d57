//! `entangle` command-line front end.
//!
//! Exit codes: 0 success, 1 table mismatch, 2 usage or parse error,
//! 3 degenerate state, 4 unrealizable measurement branch, 5 I/O error.

mod args;
mod commands;
mod failure;
mod input;
mod render;

use std::process::ExitCode;

use clap::Parser;
use entangle::indicators::EPS_ZERO;

use args::{Cli, Command, Format};
use commands::Context;
use failure::Failure;

fn run(cli: Cli) -> Result<commands::Output, Failure> {
    let eps = cli.tolerance.unwrap_or(EPS_ZERO);
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Failure::usage(format!("--tolerance must be a positive number, got {eps}")));
    }
    let ctx = Context { mode: cli.mode, eps, file: cli.file, seed: cli.seed };
    match &cli.command {
        Command::Analyze(a) => commands::analyze(&ctx, a),
        Command::Factor(a) => commands::factor(&ctx, a),
        Command::Measure(a) => commands::measure(&ctx, a),
        Command::Tables { which } => commands::tables(&ctx, *which),
        Command::Count(a) => commands::count(a),
        Command::Random(a) => commands::random(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            match format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("documents serialize")
                ),
            }
            ExitCode::from(out.code as u8)
        }
        Err(fail) => {
            eprintln!("error: {fail}");
            ExitCode::from(fail.code as u8)
        }
    }
}
