//! Parameter sweeps over the dephasing model, written as deterministic CSV.
//!
//! Every subcommand evaluates independent cells on a rayon pool and emits
//! them in sweep order (s, then temperature, then time), so the output does
//! not depend on the worker count.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};

pub use commands::Outcome;
pub use config::{Cli, Command, Kind, SweepArgs, SweepConfig};
pub use error::CliError;

pub fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Pool(e.to_string()))
}

/// Resolves the configuration, runs the sweep and writes the CSV.
pub fn run(command: Command) -> Result<Outcome, CliError> {
    let (kind, args) = command.split();
    let cfg = args.resolve(kind)?;
    let pool = build_pool(cfg.threads)?;
    let outcome = commands::run(kind, &cfg, &pool);
    match &cfg.output {
        Some(path) => {
            let io_err = |source| CliError::Io {
                path: path.clone(),
                source,
            };
            let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
            outcome.table.write(&mut out).map_err(io_err)?;
            out.flush().map_err(io_err)?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            let io_err = |source| CliError::Io {
                path: "<stdout>".into(),
                source,
            };
            outcome.table.write(&mut out).map_err(io_err)?;
            out.flush().map_err(io_err)?;
        }
    }
    Ok(outcome)
}
