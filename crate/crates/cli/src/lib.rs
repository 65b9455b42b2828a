//! Command-line front end: MLN files in, JSON reports out.
//!
//! Exit codes: 0 on success, 1 when a well-formed program is rejected on
//! semantic grounds, 2 on usage, input or parse errors.

pub mod args;
mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use infmln_core::logic::{parse_program, CompileWarning};
use infmln_core::{CompileOptions, Program};

pub use args::Cli;
pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", .path.display())]
    Program {
        path: PathBuf,
        #[source]
        source: infmln_core::Error,
    },
    #[error(transparent)]
    Core(#[from] infmln_core::Error),
    #[error("{0}")]
    Usage(String),
    /// The analysis ran and its report was written, but the program was
    /// rejected.
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Program { source, .. } | CliError::Core(source) if source.is_rejection() => 1,
            CliError::Rejected(_) => 1,
            _ => 2,
        }
    }
}

/// Reads and compiles an MLN file. Diagnostics carry the path.
pub fn load_mln_file(path: &Path) -> Result<(Program, Vec<CompileWarning>), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let in_file = |source| CliError::Program {
        path: path.to_path_buf(),
        source,
    };
    let mut program = parse_program(&text).map_err(in_file)?;
    let warnings = program.compile(&CompileOptions::default()).map_err(in_file)?;
    Ok((program, warnings))
}

fn write_report(report: &Report, output: Option<&Path>) -> Result<(), CliError> {
    let text = report.to_json();
    match output {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Parses `argv` (program name first), runs the command and writes its
/// report. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::execute(&cli.command) {
        Ok((report, rejection)) => {
            if let Err(e) = write_report(&report, cli.output.as_deref()) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            match rejection {
                Some(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
