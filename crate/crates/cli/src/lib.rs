//! Command-line front end for the `trendlab` momentum toolkit: price CSV
//! ingestion, run configuration, command orchestration and report output.

pub mod commands;
pub mod config;
pub mod ingest;
pub mod report;

use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

pub use config::{Command, OutputFormat, RunConfig, Sampling};
pub use ingest::parse_price_csv;
pub use report::{LabeledCurve, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("line {line}: duplicate date {date} (first seen on line {first_line})")]
    DuplicateDate {
        line: u64,
        first_line: u64,
        date: NaiveDate,
    },
    #[error("line {line}: non-positive price {value}")]
    NonPositivePrice { line: u64, value: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Json { path: PathBuf, message: String },
    #[error("{stage}: {source}")]
    Stage { stage: String, source: trendlab::Error },
    #[error(transparent)]
    Core(#[from] trendlab::Error),
    #[error("serializing report: {0}")]
    Serialize(#[from] serde_json::Error),
    #[error("writing CSV: {0}")]
    CsvWrite(#[from] csv::Error),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// Stable machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Csv { .. } | CliError::DuplicateDate { .. } | CliError::NonPositivePrice { .. } => "input",
            CliError::Config(_) => "config",
            CliError::Json { .. } => "schema",
            CliError::Stage { .. } | CliError::Core(_) => "computation",
            CliError::Serialize(_) | CliError::CsvWrite(_) | CliError::Output(_) => "output",
        }
    }

    /// Line number for input errors.
    pub fn line(&self) -> Option<u64> {
        match self {
            CliError::Csv { line, .. }
            | CliError::DuplicateDate { line, .. }
            | CliError::NonPositivePrice { line, .. } => Some(*line),
            _ => None,
        }
    }
}

pub(crate) fn context(stage: impl Into<String>) -> impl FnOnce(trendlab::Error) -> CliError {
    let stage = stage.into();
    move |source| CliError::Stage { stage, source }
}

/// Validates `cfg` and runs its command. Deterministic for a fixed config.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::IngestCheck => commands::run_ingest_check(cfg),
        Command::Sweep => commands::run_sweep(cfg),
        Command::Simulate => commands::run_simulate(cfg),
        Command::Regimes => commands::run_regimes(cfg),
        Command::Fit => commands::run_fit(cfg),
    }
}

/// Reads a run configuration from JSON: either a bare config or a report with
/// an embedded `config`.
pub fn load_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let json_err = |e: serde_json::Error| CliError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(json_err)?;
    if let Some(cfg) = value.get_mut("config") {
        value = cfg.take();
    }
    serde_json::from_value(value).map_err(json_err)
}
