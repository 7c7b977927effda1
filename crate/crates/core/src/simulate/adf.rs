use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ols, Matrix};
use crate::series::ReturnSeries;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfResult<T = f64> {
    /// t-statistic of the lagged level coefficient.
    pub statistic: T,
    pub critical_value_5pct: T,
    /// True when the unit root is rejected at 5%.
    pub reject_unit_root: bool,
    pub lags: usize,
    pub observations: usize,
}

/// 5% critical values for the constant-only regression (Fuller's table).
fn critical_value_5pct(n: usize) -> f64 {
    match n {
        0..50 => -3.00,
        50..100 => -2.93,
        _ => -2.89,
    }
}

/// Augmented Dickey-Fuller test with intercept and no trend:
/// `dy_t = a + g y_{t-1} + sum_{i=1..k} b_i dy_{t-i} + e_t`.
pub fn adf_test<T: Scalar>(series: &ReturnSeries<T>, max_lag: usize) -> Result<AdfResult<T>> {
    let y = series.values();
    let n = y.len();
    if n < 25 {
        return Err(Error::TooShort { needed: 25, got: n });
    }
    if max_lag + 4 >= n {
        return Err(Error::InvalidInput(format!(
            "ADF lag {max_lag} too large for {n} points"
        )));
    }
    let dy: Vec<T> = y.windows(2).map(|w| w[1] - w[0]).collect();
    // dy[t - 1] = y[t] - y[t - 1]; regress for t = max_lag + 1 ..= n - 1
    let rows: Vec<usize> = (max_lag + 1..n).collect();
    let x = Matrix::from_fn(rows.len(), 2 + max_lag, |r, c| {
        let t = rows[r];
        match c {
            0 => T::one(),
            1 => y[t - 1],
            k => dy[t - 1 - (k - 1)],
        }
    });
    let target: Vec<T> = rows.iter().map(|&t| dy[t - 1]).collect();
    let fit = ols(&x, &target)?;
    let statistic = fit.coefficients[1] / fit.standard_errors[1];
    let critical = T::lit(critical_value_5pct(n));
    Ok(AdfResult {
        statistic,
        critical_value_5pct: critical,
        reject_unit_root: statistic < critical,
        lags: max_lag,
        observations: rows.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::series::Frequency;

    fn iid(n: usize, seed: u64) -> Vec<f64> {
        let mut r = rng::seeded(seed);
        (0..n).map(|_| f64::standard_normal(&mut r)).collect()
    }

    #[test]
    fn random_walk_not_rejected() {
        let fails = (0..100u64)
            .filter(|&s| {
                let mut acc = 0.0;
                let walk: Vec<f64> = iid(250, s)
                    .into_iter()
                    .map(|e| {
                        acc += e;
                        acc
                    })
                    .collect();
                !adf_test(&ReturnSeries::synthetic(walk, Frequency::Daily), 1)
                    .unwrap()
                    .reject_unit_root
            })
            .count();
        assert!(fails >= 90, "{fails}");
    }

    #[test]
    fn white_noise_rejected() {
        let rejects = (0..100u64)
            .filter(|&s| {
                adf_test(&ReturnSeries::synthetic(iid(250, 1000 + s), Frequency::Daily), 1)
                    .unwrap()
                    .reject_unit_root
            })
            .count();
        assert!(rejects >= 90, "{rejects}");
    }

    #[test]
    fn linear_series_is_degenerate() {
        let line: Vec<f64> = (0..60).map(|t| 1.0 + 0.5 * t as f64).collect();
        for lag in [0, 2] {
            assert_eq!(
                adf_test(&ReturnSeries::synthetic(line.clone(), Frequency::Daily), lag).unwrap_err(),
                Error::RankDeficient
            );
        }
    }

    #[test]
    fn short_series_rejected() {
        assert!(matches!(
            adf_test(&ReturnSeries::synthetic(iid(24, 1), Frequency::Daily), 0),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn brackets() {
        assert_eq!(critical_value_5pct(25), -3.00);
        assert_eq!(critical_value_5pct(75), -2.93);
        assert_eq!(critical_value_5pct(2000), -2.89);
    }
}
