//! Command-line front end for `elasticbit`.
//!
//! [`run`] parses an argument vector, resolves parameters from flags and an
//! optional JSON config file, dispatches to the library and writes one table
//! as CSV or JSON. Exit codes: 0 on success, 1 when a computation or write
//! fails, 2 for usage and validation errors.

mod args;
mod commands;
mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
pub use args::Format;
use commands::OutputStyle;
use config::ConfigFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Compute(#[from] elasticbit::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(e) if e.is_invalid_input() => 2,
            CliError::Compute(_) | CliError::Io { .. } => 1,
        }
    }
}

fn parse_format(name: &str) -> Result<Format, CliError> {
    match name {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::Usage(format!(
            "format must be 'csv' or 'json', got '{other}'"
        ))),
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = match &cli.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let p = cfg.system(&cli.common)?;
    let outcome = commands::execute(&cli.command, &cfg, &p)?;

    let format = match cli.common.format {
        Some(f) => Some(f),
        None => cfg
            .string(None, "format")?
            .as_deref()
            .map(parse_format)
            .transpose()?,
    };
    let output: Option<PathBuf> = match &cli.common.output {
        Some(path) => Some(path.clone()),
        None => cfg.string(None, "output")?.map(PathBuf::from),
    };
    let mut table = outcome.table;
    if cfg.bool(cli.common.degrees, "degrees")? {
        table.to_degrees(outcome.angle_columns);
    }
    let text = match (format, outcome.default_format) {
        (Some(f), _) | (None, OutputStyle::Styled(f)) => table.render(f),
        (None, OutputStyle::Plain) => table.render_csv(false),
    };
    output::emit(&text, output.as_deref())
}

/// Runs the program on `argv` (including the program name) and returns the
/// process exit code. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 2,
            };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
