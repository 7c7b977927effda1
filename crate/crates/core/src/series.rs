//! Price and return containers, log returns, volatility normalization,
//! resampling and moment estimators.

use chrono::{Datelike, Days, Months, NaiveDate};
use serde::{Deserialize, Serialize};

pub use chrono::Weekday;

use crate::error::{Error, Result};
use crate::Scalar;

/// Sampling frequency of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    Daily,
    Weekly(Weekday),
    Monthly,
}

impl Frequency {
    /// Periods per year used for annualization.
    pub fn periods_per_year(self) -> usize {
        match self {
            Frequency::Daily => 252,
            Frequency::Weekly(_) => 52,
            Frequency::Monthly => 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnKind {
    RawLog,
    /// Divided by the mean absolute return of the previous `window` periods.
    Normalized {
        window: usize,
    },
}

fn check_increasing(dates: &[NaiveDate]) -> Result<()> {
    match dates.windows(2).find(|w| w[1] <= w[0]) {
        Some(w) => Err(Error::UnorderedTimestamps { date: w[1] }),
        None => Ok(()),
    }
}

/// Dated positive prices with strictly increasing timestamps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries<T = f64> {
    dates: Vec<NaiveDate>,
    values: Vec<T>,
    frequency: Frequency,
}

impl<T: Scalar> PriceSeries<T> {
    pub fn new(dates: Vec<NaiveDate>, values: Vec<T>, frequency: Frequency) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} dates but {} prices",
                dates.len(),
                values.len()
            )));
        }
        check_increasing(&dates)?;
        if let Some((d, v)) = dates.iter().zip(&values).find(|(_, v)| !(**v > T::zero())) {
            return Err(Error::NonPositivePrice {
                date: *d,
                value: v.to_f64_lossy(),
            });
        }
        Ok(Self {
            dates,
            values,
            frequency,
        })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map_log(&self) -> Vec<T> {
        self.values.iter().map(|v| v.ln()).collect()
    }

    fn select(&self, keep: impl Iterator<Item = usize>, frequency: Frequency) -> Result<Self> {
        let (dates, values): (Vec<_>, Vec<_>) = keep.map(|i| (self.dates[i], self.values[i])).unzip();
        if dates.is_empty() {
            return Err(Error::EmptyResult);
        }
        Ok(Self {
            dates,
            values,
            frequency,
        })
    }
}

/// Dated per-period returns. Each return carries the date of the later price.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries<T = f64> {
    dates: Vec<NaiveDate>,
    values: Vec<T>,
    kind: ReturnKind,
    period: Frequency,
}

impl<T: Scalar> ReturnSeries<T> {
    pub fn new(dates: Vec<NaiveDate>, values: Vec<T>, kind: ReturnKind, period: Frequency) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} dates but {} returns",
                dates.len(),
                values.len()
            )));
        }
        check_increasing(&dates)?;
        Ok(Self {
            dates,
            values,
            kind,
            period,
        })
    }

    /// Undated returns (simulated data), stamped with consecutive period dates
    /// starting 1900-01-05.
    pub fn synthetic(values: Vec<T>, period: Frequency) -> Self {
        let start = NaiveDate::from_ymd_opt(1900, 1, 5).expect("valid date");
        let dates = (0..values.len())
            .map(|i| match period {
                Frequency::Daily => start + Days::new(i as u64),
                Frequency::Weekly(_) => start + Days::new(7 * i as u64),
                Frequency::Monthly => start + Months::new(i as u32),
            })
            .collect();
        Self {
            dates,
            values,
            kind: ReturnKind::RawLog,
            period,
        }
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn kind(&self) -> ReturnKind {
        self.kind
    }

    pub fn period(&self) -> Frequency {
        self.period
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sub-series over `range` (indices into this series).
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            dates: self.dates[range.clone()].to_vec(),
            values: self.values[range].to_vec(),
            kind: self.kind,
            period: self.period,
        }
    }

    /// Index range of returns dated within `[start, end]`.
    pub fn range_between(&self, start: NaiveDate, end: NaiveDate) -> std::ops::Range<usize> {
        let lo = self.dates.partition_point(|d| *d < start);
        let hi = self.dates.partition_point(|d| *d <= end);
        lo..hi.max(lo)
    }

    pub(crate) fn with_values(&self, values: Vec<T>) -> Self {
        Self {
            dates: self.dates.clone(),
            values,
            kind: self.kind,
            period: self.period,
        }
    }
}

/// `X_t = ln(S_t / S_{t-1})`.
pub fn log_returns<T: Scalar>(prices: &PriceSeries<T>) -> Result<ReturnSeries<T>> {
    log_returns_inner(prices, None)
}

/// Log returns, dropping any return whose two prices are more than
/// `max_gap_days` calendar days apart (trading halts, missing anchor weeks).
pub fn log_returns_gap_filtered<T: Scalar>(prices: &PriceSeries<T>, max_gap_days: i64) -> Result<ReturnSeries<T>> {
    log_returns_inner(prices, Some(max_gap_days))
}

fn log_returns_inner<T: Scalar>(prices: &PriceSeries<T>, max_gap_days: Option<i64>) -> Result<ReturnSeries<T>> {
    if prices.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: prices.len(),
        });
    }
    let mut dates = Vec::with_capacity(prices.len() - 1);
    let mut values = Vec::with_capacity(prices.len() - 1);
    for i in 1..prices.len() {
        let (d0, d1) = (prices.dates[i - 1], prices.dates[i]);
        if let Some(max) = max_gap_days {
            if (d1 - d0).num_days() > max {
                continue;
            }
        }
        dates.push(d1);
        values.push((prices.values[i] / prices.values[i - 1]).ln());
    }
    Ok(ReturnSeries {
        dates,
        values,
        kind: ReturnKind::RawLog,
        period: prices.frequency,
    })
}

/// Divides each return by the mean absolute value of the `window` returns
/// before it. The first `window` returns are consumed as warm-up.
pub fn normalize_returns<T: Scalar>(r: &ReturnSeries<T>, window: usize) -> Result<ReturnSeries<T>> {
    if r.kind != ReturnKind::RawLog {
        return Err(Error::InvalidInput("returns are already normalized".into()));
    }
    if window == 0 {
        return Err(Error::InvalidInput("normalization window must be >= 1".into()));
    }
    if r.len() <= window {
        return Err(Error::TooShort {
            needed: window + 1,
            got: r.len(),
        });
    }
    let p = T::from_usize_lossy(window);
    let mut dates = Vec::with_capacity(r.len() - window);
    let mut values = Vec::with_capacity(r.len() - window);
    for t in window..r.len() {
        let abs_sum: T = r.values[t - window..t].iter().map(|v| v.abs()).sum();
        let denom = abs_sum / p;
        if !(denom > T::zero()) {
            return Err(Error::DegenerateNormalization { date: r.dates[t] });
        }
        dates.push(r.dates[t]);
        values.push(r.values[t] / denom);
    }
    Ok(ReturnSeries {
        dates,
        values,
        kind: ReturnKind::Normalized { window },
        period: r.period,
    })
}

/// Keeps the close of every `anchor` weekday. Weeks without a trading day on
/// that weekday are skipped rather than substituted.
pub fn resample_weekly<T: Scalar>(prices: &PriceSeries<T>, anchor: Weekday) -> Result<PriceSeries<T>> {
    let keep = (0..prices.len()).filter(|&i| prices.dates[i].weekday() == anchor);
    prices.select(keep, Frequency::Weekly(anchor))
}

/// Keeps the last trading day of each calendar month.
pub fn resample_monthly<T: Scalar>(prices: &PriceSeries<T>) -> Result<PriceSeries<T>> {
    let n = prices.len();
    let month = |d: NaiveDate| (d.year(), d.month());
    let keep = (0..n).filter(|&i| i + 1 == n || month(prices.dates[i]) != month(prices.dates[i + 1]));
    prices.select(keep, Frequency::Monthly)
}

/// Sample moments of a return series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimates<T = f64> {
    pub mean: T,
    /// Population variance (divides by the count).
    pub variance: T,
    /// `autocorrelations[k - 1]` is the lag-`k` estimate.
    pub autocorrelations: Vec<T>,
    pub count: usize,
}

pub(crate) fn mean<T: Scalar>(x: &[T]) -> T {
    x.iter().copied().sum::<T>() / T::from_usize_lossy(x.len())
}

/// Population mean and variance.
pub(crate) fn mean_variance<T: Scalar>(x: &[T]) -> (T, T) {
    let m = mean(x);
    let v = x.iter().map(|&v| (v - m) * (v - m)).sum::<T>() / T::from_usize_lossy(x.len());
    (m, v)
}

/// Standard lag-`lag` autocorrelation estimate around the global mean.
pub fn autocorrelation<T: Scalar>(x: &[T], lag: usize) -> Result<T> {
    if lag >= x.len() {
        return Err(Error::TooShort {
            needed: lag + 1,
            got: x.len(),
        });
    }
    let m = mean(x);
    autocorrelation_about(x, lag, m)
}

fn autocorrelation_about<T: Scalar>(x: &[T], lag: usize, m: T) -> Result<T> {
    let denom: T = x.iter().map(|&v| (v - m) * (v - m)).sum();
    if !(denom > T::zero()) {
        return Err(Error::ZeroStd);
    }
    let num: T = (lag..x.len()).map(|t| (x[t] - m) * (x[t - lag] - m)).sum();
    Ok((num / denom).max(-T::one()).min(T::one()))
}

/// Mean, population variance and the first `max_lag` autocorrelations.
pub fn estimate_moments<T: Scalar>(r: &ReturnSeries<T>, max_lag: usize) -> Result<MomentEstimates<T>> {
    let x = r.values();
    if max_lag >= x.len() || x.len() <= max_lag + 1 {
        return Err(Error::TooShort {
            needed: max_lag + 2,
            got: x.len(),
        });
    }
    let (m, v) = mean_variance(x);
    let autocorrelations = (1..=max_lag)
        .map(|k| autocorrelation_about(x, k, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentEstimates {
        mean: m,
        variance: v,
        autocorrelations,
        count: x.len(),
    })
}
