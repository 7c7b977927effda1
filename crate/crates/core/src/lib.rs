//! Moving-average momentum rule toolkit.
//!
//! The trading rule takes position `m_{t-1}(N)` (the trailing mean of the last
//! `N` returns) in the next period's return. This crate provides:
//!
//! - [`series`]: price/return containers, log returns, volatility
//!   normalization, weekly/monthly resampling and moment estimators.
//! - [`strategy`]: the rule itself, realized Sharpe ratios and SR/std versus
//!   look-back sweeps.
//! - [`theory`]: closed-form mean, variance and Sharpe ratio of the rule under
//!   a stationary Gaussian model, its limit cases, and a least-squares fit of
//!   the model to an empirical sweep.
//! - [`simulate`]: seeded ARMA and oscillating-drift generators, a stationarity
//!   check, an ADF test, the Monte Carlo sweep harness and a brute-force
//!   multivariate-Gaussian oracle.
//! - [`regimes`]: piecewise-linear breakpoint detection, per-regime statistics
//!   and regime-averaged sweeps.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`.

// `!(x > 0)` is used on purpose so NaN fails positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod linalg;
pub mod regimes;
pub mod rng;
pub mod series;
pub mod simulate;
pub mod strategy;
pub mod theory;

mod scalar;
pub(crate) use scalar::compensated_sum;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use series::{Frequency, ReturnKind, Weekday};
pub use strategy::{Statistic, StrategyMode};

pub type PriceSeries = series::PriceSeries<f64>;
pub type ReturnSeries = series::ReturnSeries<f64>;
pub type MomentEstimates = series::MomentEstimates<f64>;
pub type SignalSeries = strategy::SignalSeries<f64>;
pub type SweepCurve = strategy::SweepCurve<f64>;
pub type TheoryParams = theory::TheoryParams<f64>;
pub type FitResult = theory::fit::FitResult<f64>;
pub type ArmaSpec = simulate::ArmaSpec<f64>;
pub type OscSpec = simulate::OscSpec<f64>;
pub type GeneratorSpec = simulate::GeneratorSpec<f64>;
pub type McSweepResult = simulate::McSweepResult<f64>;
pub type RegimePartition = regimes::RegimePartition<f64>;

pub type PriceSeriesF32 = series::PriceSeries<f32>;
pub type ReturnSeriesF32 = series::ReturnSeries<f32>;
pub type SweepCurveF32 = strategy::SweepCurve<f32>;
pub type TheoryParamsF32 = theory::TheoryParams<f32>;
