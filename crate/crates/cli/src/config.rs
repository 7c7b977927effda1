use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use trendlab::{Frequency, StrategyMode, Weekday};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    IngestCheck,
    Sweep,
    Simulate,
    Regimes,
    Fit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::IngestCheck => "ingest-check",
            Command::Sweep => "sweep",
            Command::Simulate => "simulate",
            Command::Regimes => "regimes",
            Command::Fit => "fit",
        }
    }

    /// Largest look-back when `--n-max` is not given.
    pub fn default_n_max(self) -> usize {
        match self {
            Command::Regimes => 43,
            _ => 400,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Sampling of the return series the strategy runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    Daily,
    #[default]
    Weekly,
    Monthly,
}

impl Sampling {
    pub fn periods_per_year(self) -> usize {
        match self {
            Sampling::Daily => Frequency::Daily.periods_per_year(),
            Sampling::Weekly => Frequency::Weekly(Weekday::Fri).periods_per_year(),
            Sampling::Monthly => Frequency::Monthly.periods_per_year(),
        }
    }
}

/// Everything a command needs. Echoed verbatim into every report, so feeding a
/// report's `config` back through `--config` reproduces it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub n_min: usize,
    /// `None` selects the command default.
    pub n_max: Option<usize>,
    pub mode: StrategyMode,
    pub normalize: bool,
    pub norm_window: usize,
    pub anchors: Vec<Weekday>,
    pub frequency: Sampling,
    pub seed: u64,
    pub annualize: bool,
    pub epoch_year: i32,
    pub min_regime_weeks: usize,
    /// Shortest regime in months.
    pub min_segment: usize,
    pub max_breaks: usize,
    pub realizations: usize,
    pub length: usize,
    pub lags: usize,
    pub fit_variance: f64,
    pub starts: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

pub const ALL_WEEKDAYS: [Weekday; 5] = [Weekday::Mon, Weekday::Tue, Weekday::Wed, Weekday::Thu, Weekday::Fri];

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        Self {
            command,
            input: input.into(),
            n_min: 1,
            n_max: None,
            mode: StrategyMode::Linear,
            normalize: true,
            norm_window: 52,
            anchors: ALL_WEEKDAYS.to_vec(),
            frequency: Sampling::Weekly,
            seed: 0,
            annualize: false,
            epoch_year: 1975,
            min_regime_weeks: 70,
            min_segment: 6,
            max_breaks: 60,
            realizations: 200,
            length: 2000,
            lags: 12,
            fit_variance: 1.43 * 1.43,
            starts: 8,
            output: None,
            format: OutputFormat::Json,
        }
    }

    pub fn n_max_resolved(&self) -> usize {
        self.n_max.unwrap_or_else(|| self.command.default_n_max())
    }

    pub fn lookbacks(&self) -> Vec<usize> {
        (self.n_min..=self.n_max_resolved()).collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n_min == 0 {
            return bad("--n-min must be at least 1".into());
        }
        if self.n_max_resolved() < self.n_min {
            return bad(format!(
                "--n-max {} is below --n-min {}",
                self.n_max_resolved(),
                self.n_min
            ));
        }
        if self.normalize && self.norm_window == 0 {
            return bad("--norm-window must be positive".into());
        }
        if self.frequency == Sampling::Weekly && self.anchors.is_empty() {
            return bad("--anchors needs at least one weekday".into());
        }
        let mut seen = self.anchors.clone();
        seen.sort_by_key(|d| d.num_days_from_monday());
        seen.dedup();
        if seen.len() != self.anchors.len() {
            return bad("--anchors lists a weekday twice".into());
        }
        if self.command == Command::Simulate {
            if self.realizations < 2 {
                return bad("--realizations must be at least 2".into());
            }
            if self.length < self.n_max_resolved() + 2 {
                return bad(format!(
                    "--length {} cannot hold look-back {}",
                    self.length,
                    self.n_max_resolved()
                ));
            }
        }
        if self.command == Command::Fit {
            if self.lags == 0 {
                return bad("--lags must be positive".into());
            }
            if !(self.fit_variance.is_finite() && self.fit_variance > 0.0) {
                return bad("--fit-variance must be positive".into());
            }
            if self.starts == 0 {
                return bad("--starts must be positive".into());
            }
        }
        if self.command == Command::Regimes && self.min_segment < 2 {
            return bad("--min-segment must be at least 2 months".into());
        }
        Ok(())
    }
}
