//! The moving-average rule: signals, strategy returns, realized Sharpe ratios
//! and SR/std versus look-back sweeps.

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{mean_variance, ReturnSeries};
use crate::{compensated_sum, Scalar};

/// How the signal becomes a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyMode {
    /// Position equals the trailing mean `m_{t-1}(N)`.
    #[default]
    Linear,
    /// Position is `sign(m_{t-1}(N))`, flat when the mean is exactly zero.
    Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    #[default]
    SharpeRatio,
    StdDev,
}

/// Trailing means `m_{t-1}(N)`, dated by the return they are applied to.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSeries<T = f64> {
    pub dates: Vec<NaiveDate>,
    pub values: Vec<T>,
    pub lookback: usize,
}

fn prefix_sums<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(x.len() + 1);
    let mut acc = T::zero();
    out.push(acc);
    for &v in x {
        acc = acc + v;
        out.push(acc);
    }
    out
}

#[inline]
fn position<T: Scalar>(m: T, mode: StrategyMode) -> T {
    match mode {
        StrategyMode::Linear => m,
        StrategyMode::Sign => {
            if m > T::zero() {
                T::one()
            } else if m < T::zero() {
                -T::one()
            } else {
                T::zero()
            }
        }
    }
}

/// Strategy returns `pos(m_{t-1}(N)) * X_t` for `t` in `start..x.len()`.
fn strategy_values<T: Scalar>(x: &[T], prefix: &[T], lookback: usize, start: usize, mode: StrategyMode) -> Vec<T> {
    let n = T::from_usize_lossy(lookback);
    (start..x.len())
        .map(|t| {
            let m = (prefix[t] - prefix[t - lookback]) / n;
            position(m, mode) * x[t]
        })
        .collect()
}

fn check_lookback(lookback: usize, len: usize) -> Result<()> {
    if lookback == 0 || lookback >= len {
        return Err(Error::InvalidLookback { lookback, len });
    }
    Ok(())
}

/// `m_{t-1}(N)`: mean of the `N` returns strictly before `t`, for every `t`
/// that has a full window.
pub fn moving_average_signal<T: Scalar>(r: &ReturnSeries<T>, lookback: usize) -> Result<SignalSeries<T>> {
    let x = r.values();
    check_lookback(lookback, x.len())?;
    let prefix = prefix_sums(x);
    let n = T::from_usize_lossy(lookback);
    let values = (lookback..x.len())
        .map(|t| (prefix[t] - prefix[t - lookback]) / n)
        .collect();
    Ok(SignalSeries {
        dates: r.dates()[lookback..].to_vec(),
        values,
        lookback,
    })
}

/// Realized strategy returns `R_t`, one per `t >= N`.
pub fn strategy_returns<T: Scalar>(
    r: &ReturnSeries<T>,
    lookback: usize,
    mode: StrategyMode,
) -> Result<ReturnSeries<T>> {
    let x = r.values();
    check_lookback(lookback, x.len())?;
    let values = strategy_values(x, &prefix_sums(x), lookback, lookback, mode);
    let out = r.slice(lookback..x.len());
    Ok(out.with_values(values))
}

fn sharpe_of<T: Scalar>(x: &[T]) -> Result<T> {
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    let (m, v) = mean_variance(x);
    let sd = v.sqrt();
    if !(sd > T::epsilon() * T::lit(16.0) * m.abs()) || sd == T::zero() {
        return Err(Error::ZeroStd);
    }
    Ok(m / sd)
}

fn std_of<T: Scalar>(x: &[T]) -> Result<T> {
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    Ok(mean_variance(x).1.sqrt())
}

/// Per-period Sharpe ratio (zero risk-free rate): mean over population std.
pub fn realized_sharpe<T: Scalar>(strategy_r: &ReturnSeries<T>) -> Result<T> {
    sharpe_of(strategy_r.values())
}

/// Sharpe ratio of simply holding the asset.
pub fn buy_and_hold_sharpe<T: Scalar>(r: &ReturnSeries<T>) -> Result<T> {
    sharpe_of(r.values())
}

/// SR or std of the strategy as a function of look-back `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct SweepCurve<T = f64> {
    #[serde(rename = "N")]
    pub lookbacks: Vec<usize>,
    #[serde(rename = "value")]
    pub values: Vec<T>,
    #[serde(rename = "stderr", default, skip_serializing_if = "Option::is_none")]
    pub standard_errors: Option<Vec<T>>,
    #[serde(default)]
    pub statistic: Statistic,
    /// Multiplier already applied to `values` (1 = per period).
    #[serde(default = "one_f64")]
    pub annualization: f64,
}

fn one_f64() -> f64 {
    1.0
}

impl<T: Scalar> SweepCurve<T> {
    pub fn new(lookbacks: Vec<usize>, values: Vec<T>, statistic: Statistic) -> Result<Self> {
        let curve = Self {
            lookbacks,
            values,
            standard_errors: None,
            statistic,
            annualization: 1.0,
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        validate_lookbacks(&self.lookbacks)?;
        let len_ok = self.values.len() == self.lookbacks.len()
            && self
                .standard_errors
                .as_ref()
                .is_none_or(|se| se.len() == self.lookbacks.len());
        if !len_ok {
            return Err(Error::InvalidInput("curve arrays differ in length".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.lookbacks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lookbacks.is_empty()
    }

    /// Value at look-back `n`, if present.
    pub fn at(&self, n: usize) -> Option<T> {
        self.lookbacks.iter().position(|&k| k == n).map(|i| self.values[i])
    }

    /// Scales values (and standard errors) by `sqrt(periods_per_year)`.
    pub fn annualized(mut self, periods_per_year: usize) -> Self {
        let f = (periods_per_year as f64).sqrt();
        let ft = T::lit(f);
        self.values.iter_mut().for_each(|v| *v = *v * ft);
        if let Some(se) = self.standard_errors.as_mut() {
            se.iter_mut().for_each(|v| *v = *v * ft);
        }
        self.annualization *= f;
        self
    }
}

fn validate_lookbacks(lookbacks: &[usize]) -> Result<()> {
    if lookbacks.is_empty() {
        return Err(Error::InvalidInput("empty look-back range".into()));
    }
    if lookbacks[0] == 0 || lookbacks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "look-backs must be >= 1, unique and ascending".into(),
        ));
    }
    Ok(())
}

/// Evaluates the strategy for every `N` in `lookbacks` on a common window:
/// all strategy returns start at `t = max(lookbacks)` (0-based), so every `N`
/// is scored on the same dates.
pub fn sweep<T: Scalar>(
    r: &ReturnSeries<T>,
    lookbacks: &[usize],
    mode: StrategyMode,
    statistic: Statistic,
) -> Result<SweepCurve<T>> {
    sweep_values(r.values(), lookbacks, mode, statistic)
}

pub(crate) fn sweep_values<T: Scalar>(
    x: &[T],
    lookbacks: &[usize],
    mode: StrategyMode,
    statistic: Statistic,
) -> Result<SweepCurve<T>> {
    validate_lookbacks(lookbacks)?;
    let max_n = *lookbacks.last().expect("non-empty");
    if max_n + 2 > x.len() {
        return Err(Error::TooShort {
            needed: max_n + 2,
            got: x.len(),
        });
    }
    let prefix = prefix_sums(x);
    let values = lookbacks
        .par_iter()
        .map(|&n| {
            let rs = strategy_values(x, &prefix, n, max_n, mode);
            match statistic {
                Statistic::SharpeRatio => sharpe_of(&rs),
                Statistic::StdDev => std_of(&rs),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SweepCurve::new(lookbacks.to_vec(), values, statistic)
}

/// Pointwise mean of curves sharing one `N` grid; standard error is the
/// pointwise sample std divided by `sqrt(count)`.
pub fn average_curves<T: Scalar>(curves: &[SweepCurve<T>]) -> Result<SweepCurve<T>> {
    let first = curves.first().ok_or(Error::NoCurves)?;
    if curves.iter().any(|c| {
        c.lookbacks != first.lookbacks
            || c.statistic != first.statistic
            || c.annualization != first.annualization
            || c.values.len() != first.values.len()
    }) {
        return Err(Error::MismatchedCurves);
    }
    if curves.len() == 1 {
        return Ok(first.clone());
    }
    let count = T::from_usize_lossy(curves.len());
    let mut values = Vec::with_capacity(first.len());
    let mut errors = Vec::with_capacity(first.len());
    for i in 0..first.len() {
        let m = compensated_sum(curves.iter().map(|c| c.values[i])) / count;
        let ss = compensated_sum(curves.iter().map(|c| (c.values[i] - m) * (c.values[i] - m)));
        let sd = (ss / (count - T::one())).sqrt();
        values.push(m);
        errors.push(sd / count.sqrt());
    }
    Ok(SweepCurve {
        lookbacks: first.lookbacks.clone(),
        values,
        standard_errors: Some(errors),
        statistic: first.statistic,
        annualization: first.annualization,
    })
}
