use clap::{Parser, Subcommand};
use mimetic_leapfrog::config::parse_config;
use mimetic_leapfrog::runner::{run_scenario, RunOptions};
use mimetic_leapfrog::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Leapfrog and mimetic wave scheme runner.
#[derive(Parser)]
#[command(name = "mimetic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory for the ledger and snapshots.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Suppress the drift summary.
        #[arg(long)]
        quiet: bool,
    },
}

/// Value of MIMETIC_THREADS. Stepping is sequential, so any value yields
/// the same output; the variable is validated only.
fn threads() -> Result<usize, String> {
    match std::env::var("MIMETIC_THREADS") {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("MIMETIC_THREADS must be a positive integer, got `{v}`")),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let Command::Run { config, out, quiet } = cli.command;
    if let Err(e) = threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.display());
            return ExitCode::from(3);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    match run_scenario(&cfg, &RunOptions { out_dir: out, quiet }) {
        Ok(_) => ExitCode::SUCCESS,
        Err(Error::Instability { step }) => {
            eprintln!("error: instability detected at step {step}");
            ExitCode::from(2)
        }
        Err(e @ Error::Io(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
