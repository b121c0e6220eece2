use std::process::ExitCode;

use clap::Parser;
use qsl_dephasing_cli::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version land here too
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match qsl_dephasing_cli::run(cli.command) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            let unconverged = outcome.table.rows.iter().filter(|r| !r.converged).count();
            if unconverged > 0 {
                eprintln!("warning: {unconverged} rows did not converge (converged = 0)");
            }
            if outcome.partial() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
