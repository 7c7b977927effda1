use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("non-positive price {value} at {date}")]
    NonPositivePrice { date: NaiveDate, value: f64 },

    #[error("timestamps not strictly increasing at {date}")]
    UnorderedTimestamps { date: NaiveDate },

    #[error("normalization window ending before {date} has zero mean absolute return")]
    DegenerateNormalization { date: NaiveDate },

    #[error("zero standard deviation")]
    ZeroStd,

    #[error("look-back {lookback} must satisfy 1 <= N < series length {len}")]
    InvalidLookback { lookback: usize, len: usize },

    #[error("curves do not share the same N grid and statistic")]
    MismatchedCurves,

    #[error("no curves to average")]
    NoCurves,

    #[error("matrix is not positive definite (failed at pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("model variance is not positive ({value}) at N = {lookback}; autocorrelations are inconsistent")]
    NonPositiveVariance { lookback: usize, value: f64 },

    #[error("regression is rank deficient")]
    RankDeficient,

    #[error("segmentation infeasible: length {len} with minimum segment {min_segment}")]
    InfeasibleSegmentation { len: usize, min_segment: usize },

    #[error("every regime was removed by the minimum length filter")]
    AllRegimesDropped,

    #[error("regime {index} has {len} returns, need at least {needed}")]
    RegimeTooShort { index: usize, len: usize, needed: usize },

    #[error("target autocorrelation {target} at lag {lag} is not attainable")]
    UnattainableAutocorrelation { lag: usize, target: f64 },

    #[error("resampling produced no observations")]
    EmptyResult,

    #[error("optimizer did not converge: best residual {best_residual}")]
    NoConvergence {
        best_params: Vec<f64>,
        best_residual: f64,
        residual_history: Vec<f64>,
    },
}
