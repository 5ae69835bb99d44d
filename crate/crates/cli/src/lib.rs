//! Batch front-end: configured suite runs, versioned JSON reports, DOT
//! exports and report summaries.

pub mod config;
mod graphs;
mod quasi_lab;
pub mod report;
pub mod suites;

pub use config::{ConeOffSpec, FamilySpec, Format, GraphSpec, RunConfig};
pub use report::{render_text, Report, Summary, SCHEMA, SCHEMA_VERSION};
pub use suites::{run, RunOutput, SuiteInfo, CATALOG};

use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;

    /// 2 for usage and schema errors, 3 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Schema(_) => Self::USAGE,
            CliError::Io { .. } => Self::IO,
        }
    }
}

/// Writes the report and its artifacts.
pub fn write_outputs(out: &RunOutput, path: &Path, format: Format) -> Result<(), CliError> {
    for (p, contents) in &out.files {
        std::fs::write(p, contents).map_err(|e| CliError::io(p, e))?;
    }
    let text = match format {
        Format::Json => out.report.to_json(),
        Format::Text => render_text(&out.report),
    };
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Human summary of a JSON report file and the exit code its verdicts imply.
pub fn explain(path: &Path) -> Result<(String, i32), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let report = Report::from_json(&text)?;
    Ok((render_text(&report), report.exit_code()))
}
