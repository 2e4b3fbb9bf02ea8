//! Command-line driver for `crmorse-core`.

/// Clap argument definitions.
pub mod args;
/// Property checks behind `verify` and the acceptance target.
pub mod checks;
/// `analyze-point` and `analyze-manifold`.
pub mod commands;
/// Input and report documents.
pub mod documents;
/// Error type and exit codes.
pub mod error;
/// `verify` suites and table output.
pub mod verify;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use documents::ReportDocument;
use error::{CliError, CliResult, EXIT_OK, EXIT_USAGE};

/// Worker-count environment variable.
pub const THREADS_ENV: &str = "CRMORSE_THREADS";

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    // A pool built earlier in this process keeps its size.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn emit(report: &ReportDocument, output: Option<&Path>) -> CliResult<()> {
    let text = report.to_json();
    match output {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    configure_threads()?;
    match cli.command {
        Command::AnalyzePoint(a) => {
            emit(&commands::analyze_point(&a)?, a.output.as_deref()).map(|_| EXIT_OK)
        }
        Command::AnalyzeManifold(a) => {
            emit(&commands::analyze_manifold(&a)?, a.output.as_deref()).map(|_| EXIT_OK)
        }
        Command::Verify(a) => Ok(verify::verify(&a)),
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return EXIT_OK;
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default();
            eprintln!(
                "{}",
                json!({ "error": "UsageError", "message": first, "exit_code": EXIT_USAGE })
            );
            return EXIT_USAGE;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
