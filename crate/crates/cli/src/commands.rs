use std::path::Path;

use chrono::Datelike;
use serde_json::{json, Map, Value};
use trendlab::regimes::{detect_breakpoints, filter_regimes, regime_autocorrelations, regime_sweep};
use trendlab::series::{
    estimate_moments, log_returns, log_returns_gap_filtered, normalize_returns, resample_monthly, resample_weekly,
};
use trendlab::simulate::{adf_test, arma_is_stationary, arma_theory_params, monte_carlo_sweep};
use trendlab::strategy::{average_curves, buy_and_hold_sharpe, sweep};
use trendlab::theory::fit::{fit_theory_params, FitOptions};
use trendlab::theory::theoretical_curve;
use trendlab::{GeneratorSpec, PriceSeries, RegimePartition, ReturnSeries, Statistic, StrategyMode, SweepCurve};

use crate::config::{RunConfig, Sampling};
use crate::ingest::parse_price_csv;
use crate::report::{LabeledCurve, Report};
use crate::{context, CliError};

/// Longest calendar gap a weekly or daily return may span.
const MAX_GAP_DAYS: i64 = 7;
const DIAGNOSTIC_LAGS: usize = 4;

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_prices(cfg: &RunConfig) -> Result<PriceSeries, CliError> {
    let file = std::fs::File::open(&cfg.input).map_err(|source| CliError::Io {
        path: cfg.input.clone(),
        source,
    })?;
    parse_price_csv(std::io::BufReader::new(file))
}

struct LabeledReturns {
    label: String,
    series: ReturnSeries,
    /// Returns removed for spanning a calendar gap.
    gaps_dropped: usize,
}

/// Resample, difference, gap-filter and optionally normalize, once per anchor
/// for weekly sampling.
fn return_series(prices: &PriceSeries, cfg: &RunConfig) -> Result<Vec<LabeledReturns>, CliError> {
    let finish = |label: String, sampled: PriceSeries, gap: Option<i64>| -> Result<LabeledReturns, CliError> {
        let raw = match gap {
            Some(days) => log_returns_gap_filtered(&sampled, days),
            None => log_returns(&sampled),
        }
        .map_err(context(format!("log returns ({label})")))?;
        let gaps_dropped = sampled.len() - 1 - raw.len();
        let series = if cfg.normalize {
            normalize_returns(&raw, cfg.norm_window).map_err(context(format!("normalization ({label})")))?
        } else {
            raw
        };
        Ok(LabeledReturns {
            label,
            series,
            gaps_dropped,
        })
    };
    match cfg.frequency {
        Sampling::Daily => Ok(vec![finish("daily".into(), prices.clone(), Some(MAX_GAP_DAYS))?]),
        Sampling::Monthly => {
            let monthly = resample_monthly(prices).map_err(context("monthly resample"))?;
            Ok(vec![finish("monthly".into(), monthly, None)?])
        }
        Sampling::Weekly => cfg
            .anchors
            .iter()
            .map(|&anchor| {
                let label = anchor.to_string();
                let weekly = resample_weekly(prices, anchor).map_err(context(format!("weekly resample ({label})")))?;
                finish(label, weekly, Some(MAX_GAP_DAYS))
            })
            .collect(),
    }
}

fn series_diagnostics(s: &LabeledReturns) -> Result<Value, CliError> {
    let r = &s.series;
    let moments = estimate_moments(r, DIAGNOSTIC_LAGS).map_err(context(format!("moments ({})", s.label)))?;
    Ok(json!({
        "label": s.label,
        "returns": r.len(),
        "gaps_dropped": s.gaps_dropped,
        "first": r.dates().first(),
        "last": r.dates().last(),
        "mean": moments.mean,
        "variance": moments.variance,
        "autocorrelations": moments.autocorrelations,
        "buy_and_hold_sr": buy_and_hold_sharpe(r).ok(),
    }))
}

fn annualize(curve: SweepCurve, cfg: &RunConfig) -> SweepCurve {
    if cfg.annualize {
        curve.annualized(cfg.frequency.periods_per_year())
    } else {
        curve
    }
}

fn report(cfg: &RunConfig, curves: Vec<LabeledCurve>, diagnostics: Map<String, Value>) -> Report {
    Report {
        config: cfg.clone(),
        curves,
        partition: None,
        params: None,
        diagnostics,
    }
}

pub fn run_ingest_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let prices = load_prices(cfg)?;
    let mut diag = Map::new();
    diag.insert("prices".into(), json!(prices.len()));
    diag.insert("first".into(), json!(prices.dates().first()));
    diag.insert("last".into(), json!(prices.dates().last()));
    let mut series = Vec::new();
    for s in return_series(&prices, cfg)? {
        let mut d = series_diagnostics(&s)?;
        let adf = adf_test(&s.series, DIAGNOSTIC_LAGS).map_err(context(format!("ADF ({})", s.label)))?;
        d["adf"] = serde_json::to_value(adf)?;
        series.push(d);
    }
    diag.insert("series".into(), Value::Array(series));
    Ok(report(cfg, Vec::new(), diag))
}

/// Per-series sweeps followed by their pointwise mean (labelled `mean`).
pub fn run_sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let prices = load_prices(cfg)?;
    let lookbacks = cfg.lookbacks();
    let series = return_series(&prices, cfg)?;
    let mut per_series = Vec::with_capacity(series.len());
    let mut diag_series = Vec::with_capacity(series.len());
    for s in &series {
        let curve = sweep(&s.series, &lookbacks, cfg.mode, Statistic::SharpeRatio)
            .map_err(context(format!("sweep ({})", s.label)))?;
        per_series.push(LabeledCurve::new(s.label.clone(), annualize(curve, cfg)));
        diag_series.push(series_diagnostics(s)?);
    }
    let curves: Vec<SweepCurve> = per_series.iter().map(|c| c.curve.clone()).collect();
    let mean = average_curves(&curves).map_err(context("averaging anchors"))?;
    let mut all = vec![LabeledCurve::new("mean", mean)];
    all.extend(per_series);
    let mut diag = Map::new();
    diag.insert("series".into(), Value::Array(diag_series));
    Ok(report(cfg, all, diag))
}

pub fn run_simulate(cfg: &RunConfig) -> Result<Report, CliError> {
    let text = read_input(&cfg.input)?;
    let spec: GeneratorSpec = serde_json::from_str(&text).map_err(|e| CliError::Json {
        path: cfg.input.clone(),
        message: e.to_string(),
    })?;
    let lookbacks = cfg.lookbacks();
    let mc = monte_carlo_sweep(&spec, cfg.realizations, cfg.length, &lookbacks, cfg.mode, cfg.seed)
        .map_err(context("Monte Carlo sweep"))?;
    let mut curves = vec![LabeledCurve::new("simulated", annualize(mc.curve, cfg))];
    let mut diag = Map::new();
    diag.insert("generator".into(), json!(mc.generator));
    diag.insert("realizations".into(), json!(mc.realizations));
    diag.insert("length".into(), json!(mc.length));
    let mut params = None;
    if let GeneratorSpec::Arma(arma) = &spec {
        let stationarity = arma_is_stationary(arma);
        diag.insert("stationarity".into(), serde_json::to_value(&stationarity)?);
        diag.insert("burn_in".into(), json!(arma.burn_in()));
        // The closed form describes the linear rule only.
        if cfg.mode == StrategyMode::Linear && stationarity.stationary {
            let tp = arma_theory_params(arma, cfg.n_max_resolved()).map_err(context("ARMA autocorrelations"))?;
            let theory = theoretical_curve(&tp, &lookbacks).map_err(context("theoretical curve"))?;
            curves.push(LabeledCurve::new("theory", annualize(theory, cfg)));
            params = Some(tp);
        }
    }
    let mut rep = report(cfg, curves, diag);
    rep.params = params;
    Ok(rep)
}

pub fn run_regimes(cfg: &RunConfig) -> Result<Report, CliError> {
    let prices = load_prices(cfg)?;
    let monthly = resample_monthly(&prices).map_err(context("monthly resample"))?;
    let detected =
        detect_breakpoints(&monthly, cfg.min_segment, cfg.max_breaks).map_err(context("breakpoint detection"))?;
    let filtered = filter_regimes(&detected, cfg.min_regime_weeks).map_err(context("regime filter"))?;
    let lookbacks = cfg.lookbacks();
    let series = return_series(&prices, cfg)?;
    // Normalization warm-up and gap filtering can leave a regime with too few
    // returns for the longest look-back; such regimes are skipped for every
    // anchor alike.
    let needed = cfg.n_max_resolved() + 2;
    let (kept, skipped): (Vec<_>, Vec<_>) = filtered.segments.iter().cloned().partition(|seg| {
        series
            .iter()
            .all(|s| s.series.range_between(seg.span_start, seg.end_date).len() >= needed)
    });
    if kept.is_empty() {
        return Err(CliError::Stage {
            stage: format!("regimes with at least {needed} returns"),
            source: trendlab::Error::AllRegimesDropped,
        });
    }
    let partition = RegimePartition {
        segments: kept,
        ..filtered
    };
    let pre_epoch: Vec<bool> = partition
        .segments
        .iter()
        .map(|s| s.span_start.year() < cfg.epoch_year)
        .collect();

    let mut all = Vec::new();
    let (mut pre, mut post) = (Vec::new(), Vec::new());
    let mut autocorr = Vec::new();
    for s in &series {
        let rs = regime_sweep(&s.series, &partition, &lookbacks, cfg.mode, None)
            .map_err(context(format!("regime sweep ({})", s.label)))?;
        for (curve, &is_pre) in rs.per_regime.into_iter().zip(&pre_epoch) {
            let curve = annualize(curve, cfg);
            if is_pre {
                pre.push(curve.clone());
            } else {
                post.push(curve.clone());
            }
            all.push(curve);
        }
        let lags = (1..=DIAGNOSTIC_LAGS)
            .map(|lag| regime_autocorrelations(&s.series, &partition, lag, cfg.epoch_year))
            .collect::<Result<Vec<_>, _>>()
            .map_err(context(format!("regime autocorrelations ({})", s.label)))?;
        autocorr.push(json!({ "label": s.label, "lags": lags }));
    }
    let mut curves = vec![LabeledCurve::new(
        "regimes",
        average_curves(&all).map_err(context("averaging regimes"))?,
    )];
    if !pre.is_empty() {
        let c = average_curves(&pre).map_err(context("averaging pre-epoch regimes"))?;
        curves.push(LabeledCurve::new(format!("regimes-before-{}", cfg.epoch_year), c));
    }
    if !post.is_empty() {
        let c = average_curves(&post).map_err(context("averaging post-epoch regimes"))?;
        curves.push(LabeledCurve::new(format!("regimes-from-{}", cfg.epoch_year), c));
    }

    let mut diag = Map::new();
    diag.insert("months".into(), json!(monthly.len()));
    diag.insert("regimes_detected".into(), json!(detected.segments.len()));
    diag.insert("regimes_kept".into(), json!(partition.segments.len()));
    diag.insert("regimes_skipped_short".into(), json!(skipped.len()));
    diag.insert(
        "regimes_before_epoch".into(),
        json!(pre_epoch.iter().filter(|&&p| p).count()),
    );
    diag.insert("autocorrelations".into(), Value::Array(autocorr));
    let mut rep = report(cfg, curves, diag);
    rep.partition = Some(partition);
    Ok(rep)
}

/// Accepts either a report (its first Sharpe ratio curve is fitted) or a bare
/// curve object.
fn load_empirical_curve(cfg: &RunConfig) -> Result<SweepCurve, CliError> {
    let text = read_input(&cfg.input)?;
    let json_err = |e: serde_json::Error| CliError::Json {
        path: cfg.input.clone(),
        message: e.to_string(),
    };
    let value: Value = serde_json::from_str(&text).map_err(json_err)?;
    let curve: SweepCurve = if value.get("curves").is_some() {
        let rep: Report = serde_json::from_value(value).map_err(json_err)?;
        rep.curves
            .into_iter()
            .map(|c| c.curve)
            .find(|c| c.statistic == Statistic::SharpeRatio)
            .ok_or_else(|| CliError::Config("report holds no Sharpe ratio curve".into()))?
    } else {
        serde_json::from_value(value).map_err(json_err)?
    };
    curve.validate().map_err(context("empirical curve"))?;
    if curve.annualization != 1.0 {
        return Err(CliError::Config("fit needs a per-period (not annualized) curve".into()));
    }
    let (lo, hi) = (cfg.n_min, cfg.n_max_resolved());
    let keep: Vec<usize> = (0..curve.len())
        .filter(|&i| (lo..=hi).contains(&curve.lookbacks[i]))
        .collect();
    Ok(SweepCurve {
        lookbacks: keep.iter().map(|&i| curve.lookbacks[i]).collect(),
        values: keep.iter().map(|&i| curve.values[i]).collect(),
        standard_errors: curve.standard_errors.map(|se| keep.iter().map(|&i| se[i]).collect()),
        ..curve
    })
}

pub fn run_fit(cfg: &RunConfig) -> Result<Report, CliError> {
    let empirical = load_empirical_curve(cfg)?;
    let opts = FitOptions {
        starts: cfg.starts,
        seed: cfg.seed,
        ..FitOptions::default()
    };
    let fit = fit_theory_params(&empirical, cfg.fit_variance, cfg.lags, &opts).map_err(context("fit"))?;
    let mut diag = Map::new();
    diag.insert("residual_norm".into(), json!(fit.residual_norm));
    diag.insert("residual_history".into(), json!(fit.residual_history));
    diag.insert("best_start".into(), json!(fit.best_start));
    diag.insert("converged_starts".into(), json!(fit.converged_starts));
    diag.insert("iterations".into(), json!(fit.iterations));
    diag.insert("points".into(), json!(empirical.len()));
    let curves = vec![
        LabeledCurve::new("empirical", empirical),
        LabeledCurve::new("fitted", fit.fitted),
    ];
    let mut rep = report(cfg, curves, diag);
    rep.params = Some(fit.params);
    Ok(rep)
}
