//! `ccchart`: capability charts for four-wire reconfigurable converters
//! from the terminal. Measures chart areas and volumes, traces boundaries,
//! slices interconnected charts, searches leg splits, and renders results
//! as deterministic SVG.

mod args;
mod commands;
mod outfmt;
mod render;
mod svg;

use clap::Parser;

fn main() {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        // Usage errors exit 2, --help and --version exit 0.
        Err(e) => e.exit(),
    };
    let threads = ccchart_core::parallel::configure_threads_from_env();
    if let Err(e) = commands::dispatch(cli.command, threads) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
