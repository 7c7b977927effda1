use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use trendlab::{StrategyMode, Weekday};
use trendlab_cli::{load_config, run, CliError, Command, OutputFormat, RunConfig, Sampling};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    IngestCheck,
    Sweep,
    Simulate,
    Regimes,
    Fit,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::IngestCheck => Command::IngestCheck,
            CommandArg::Sweep => Command::Sweep,
            CommandArg::Simulate => Command::Simulate,
            CommandArg::Regimes => Command::Regimes,
            CommandArg::Fit => Command::Fit,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Linear,
    Sign,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FrequencyArg {
    Daily,
    Weekly,
    Monthly,
}

fn parse_weekday(s: &str) -> Result<Weekday, String> {
    s.trim().parse().map_err(|_| format!("unknown weekday `{s}`"))
}

/// Moving-average momentum backtests, simulations, regime analysis and model fits.
#[derive(Debug, Parser)]
#[command(name = "trendlab", version)]
struct Cli {
    /// Command to run (alternatively --command).
    #[arg(value_enum, conflicts_with = "command_flag")]
    command: Option<CommandArg>,
    #[arg(long = "command", value_enum, id = "command_flag")]
    command_flag: Option<CommandArg>,
    /// Price CSV (`date,close`); generator JSON for simulate; curve or report JSON for fit.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    /// Largest look-back (default 43 for regimes, 400 otherwise).
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, value_enum, default_value = "linear")]
    mode: ModeArg,
    /// Volatility normalization window in periods.
    #[arg(long, default_value_t = 52)]
    norm_window: usize,
    #[arg(long)]
    no_normalize: bool,
    /// Weekday anchors for weekly resampling, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_weekday, default_value = "mon,tue,wed,thu,fri")]
    anchors: Vec<Weekday>,
    #[arg(long, env = "TRENDLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Scale Sharpe ratios by sqrt(periods per year).
    #[arg(long)]
    annualize: bool,
    #[arg(long, default_value_t = 1975)]
    epoch_year: i32,
    #[arg(long, default_value_t = 70)]
    min_regime_weeks: usize,
    #[arg(long, value_enum, default_value = "weekly")]
    frequency: FrequencyArg,
    /// Shortest regime in months.
    #[arg(long, default_value_t = 6)]
    min_segment: usize,
    #[arg(long, default_value_t = 60)]
    max_breaks: usize,
    #[arg(long, default_value_t = 200)]
    realizations: usize,
    /// Points per simulated series.
    #[arg(long, default_value_t = 2000)]
    length: usize,
    /// Autocorrelation lags fitted.
    #[arg(long, default_value_t = 12)]
    lags: usize,
    /// Return variance held fixed during the fit.
    #[arg(long, default_value_t = 1.43 * 1.43)]
    fit_variance: f64,
    #[arg(long, default_value_t = 8)]
    starts: usize,
    /// Report path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Re-run the configuration embedded in a report (other flags ignored).
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, CliError> {
        if let Some(path) = &self.config {
            return load_config(path);
        }
        let command = self
            .command
            .or(self.command_flag)
            .ok_or_else(|| CliError::Config("no command given".into()))?;
        let input = self
            .input
            .ok_or_else(|| CliError::Config("--input is required".into()))?;
        let mut cfg = RunConfig::new(command.into(), input);
        cfg.n_min = self.n_min;
        cfg.n_max = self.n_max;
        cfg.mode = match self.mode {
            ModeArg::Linear => StrategyMode::Linear,
            ModeArg::Sign => StrategyMode::Sign,
        };
        cfg.normalize = !self.no_normalize;
        cfg.norm_window = self.norm_window;
        cfg.anchors = self.anchors;
        cfg.frequency = match self.frequency {
            FrequencyArg::Daily => Sampling::Daily,
            FrequencyArg::Weekly => Sampling::Weekly,
            FrequencyArg::Monthly => Sampling::Monthly,
        };
        cfg.seed = self.seed;
        cfg.annualize = self.annualize;
        cfg.epoch_year = self.epoch_year;
        cfg.min_regime_weeks = self.min_regime_weeks;
        cfg.min_segment = self.min_segment;
        cfg.max_breaks = self.max_breaks;
        cfg.realizations = self.realizations;
        cfg.length = self.length;
        cfg.lags = self.lags;
        cfg.fit_variance = self.fit_variance;
        cfg.starts = self.starts;
        cfg.output = self.output;
        cfg.format = match self.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        };
        Ok(cfg)
    }
}

fn fail(kind: &str, message: &str, line: Option<u64>) -> ExitCode {
    let mut err = serde_json::json!({ "kind": kind, "message": message });
    if let Some(line) = line {
        err["line"] = line.into();
    }
    eprintln!("{}", serde_json::json!({ "error": err }));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail("usage", first, None);
        }
    };
    let result = cli
        .into_config()
        .and_then(|cfg| run(&cfg))
        .and_then(|report| report.write(&mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string(), e.line()),
    }
}
