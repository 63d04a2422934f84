//! Command-line driver: verifies transfer pairs, reproduces the orthogonal
//! pairings and pair tables, and runs two-grid convergence experiments.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on a config or
//! construction error.

mod commands;
mod config;
mod recipe;
mod report;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::CommonArgs;

#[derive(Parser, Debug)]
#[command(name = "compatamg", version, about = "Compatible transfer pairs for nonsymmetric AMG")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build each --pair and check orthogonality of its coarse-grid correction
    /// in each --norm.
    VerifyPairs(CommonArgs),
    /// Check the ten orthogonal pairings of ideal operators.
    Figure1(CommonArgs),
    /// Build both pair tables and check each computed cell.
    Tables(CommonArgs),
    /// Two-grid convergence factor and residual history for each --pair.
    Converge(CommonArgs),
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("COMPATAMG_THREADS") {
        let n: usize = v
            .parse()
            .with_context(|| format!("COMPATAMG_THREADS: expected a count, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("COMPATAMG_THREADS: cannot size thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    init_threads()?;
    match cli.command {
        Command::VerifyPairs(args) => {
            let cfg = args.resolve()?;
            let (recs, ok) = commands::verify_pairs(&cfg)?;
            report::emit("verify-pairs", &cfg, &recs, ok)?;
            Ok(ok)
        }
        Command::Figure1(args) => {
            let cfg = args.resolve()?;
            let (recs, ok) = commands::figure1(&cfg)?;
            report::emit("figure1", &cfg, &recs, ok)?;
            Ok(ok)
        }
        Command::Tables(args) => {
            let cfg = args.resolve()?;
            let (recs, ok) = commands::tables(&cfg)?;
            report::emit("tables", &cfg, &recs, ok)?;
            Ok(ok)
        }
        Command::Converge(args) => {
            let cfg = args.resolve()?;
            let recs = commands::converge(&cfg)?;
            report::emit("converge", &cfg, &recs, true)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
