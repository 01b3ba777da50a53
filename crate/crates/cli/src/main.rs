//! `rcd`: experiment harness for robust community detection.
//!
//! Every subcommand writes one CSV table, preceded by `#` metadata lines
//! carrying the schema version, tool version and the full configuration.
//! Exit codes: 0 on success, 2 on usage errors, 1 on runtime failures.

mod args;
mod commands;
mod error;
mod pool;
mod table;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with 2 on malformed flags and 0 for --help / --version
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Synth(a) => commands::synth(a).and_then(|t| t.emit(a.solver.out.as_deref())),
        Command::Sweep(a) => commands::sweep(a).and_then(|t| t.emit(a.solver.out.as_deref())),
        Command::Real(a) => commands::real(a).and_then(|t| t.emit(a.solver.out.as_deref())),
        Command::Baseline(a) => commands::baseline(a).and_then(|t| t.emit(a.out.as_deref())),
    };
    if let Err(e) = result {
        eprintln!("rcd: {e}");
        std::process::exit(e.exit_code());
    }
}
