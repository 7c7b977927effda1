//! Closed-form mean, variance and Sharpe ratio of the linear moving-average
//! rule when returns are a stationary Gaussian process.
//!
//! With drift `mu`, variance `V` and autocorrelation `rho(k)`, the rule
//! `R = m_{t-1}(N) X_t` has
//!
//! ```text
//! E[R]   = mu^2 + (V/N) S,                S = sum_{i=1..N} rho(i)
//! Var[R] = (1/N^2) [ N V^2 + N mu^2 V + N^2 V mu^2 + V^2 S^2 + V^2 C
//!                    + mu^2 V (2 S + sum_{i!=j} (rho(j) + rho(|i-j|) + rho(i))) ]
//! ```
//!
//! where `C = sum_{i!=j} rho(|i-j|)` over `i, j` in `1..=N`. Lags beyond the
//! supplied autocorrelations are zero.

pub mod fit;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::strategy::{Statistic, SweepCurve};
use crate::Scalar;

/// Parameters of the stationary Gaussian return model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryParams<T = f64> {
    pub mu: T,
    #[serde(rename = "V")]
    pub variance: T,
    /// `rho[k - 1]` is the lag-`k` autocorrelation.
    pub rho: Vec<T>,
}

impl<T: Scalar> TheoryParams<T> {
    pub fn new(mu: T, variance: T, rho: Vec<T>) -> Result<Self> {
        let tp = Self { mu, variance, rho };
        tp.validate()?;
        Ok(tp)
    }

    pub fn iid(mu: T, variance: T) -> Self {
        Self {
            mu,
            variance,
            rho: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.variance > T::zero()) || !self.variance.is_finite() {
            return Err(Error::InvalidInput(format!(
                "variance must be > 0, got {}",
                self.variance
            )));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidInput("drift must be finite".into()));
        }
        if let Some((k, r)) = self.rho.iter().enumerate().find(|(_, r)| !(r.abs() < T::one())) {
            return Err(Error::InvalidInput(format!(
                "autocorrelation at lag {} is {r}, must lie in (-1, 1)",
                k + 1
            )));
        }
        Ok(())
    }

    /// `rho(lag)`, with `rho(0) = 1` and zero past the last supplied lag.
    #[inline]
    pub fn rho_at(&self, lag: usize) -> T {
        match lag {
            0 => T::one(),
            k => self.rho.get(k - 1).copied().unwrap_or_else(T::zero),
        }
    }

    /// Correlation matrix of `(X_{t-N}, ..., X_t)`.
    pub fn correlation_matrix(&self, lookback: usize) -> Matrix<T> {
        Matrix::from_fn(lookback + 1, lookback + 1, |i, j| self.rho_at(i.abs_diff(j)))
    }

    /// Fails unless the `(N+1)`-dimensional correlation matrix is positive
    /// definite.
    pub fn check_positive_definite(&self, lookback: usize) -> Result<()> {
        Cholesky::new(&self.correlation_matrix(lookback)).map(|_| ())
    }
}

fn lag_sum<T: Scalar>(tp: &TheoryParams<T>, lookback: usize) -> T {
    (1..=lookback).map(|i| tp.rho_at(i)).sum()
}

/// `sum_{i != j} rho(|i-j|)` over `1..=N`: lag `d` occurs `2 (N - d)` times.
fn off_diagonal_sum<T: Scalar>(tp: &TheoryParams<T>, lookback: usize) -> T {
    (1..lookback)
        .map(|d| T::from_usize_lossy(2 * (lookback - d)) * tp.rho_at(d))
        .sum()
}

/// `E[m_{t-1}(N) X_t]`.
pub fn expected_return<T: Scalar>(tp: &TheoryParams<T>, lookback: usize) -> T {
    let n = T::from_usize_lossy(lookback.max(1));
    tp.mu * tp.mu + tp.variance / n * lag_sum(tp, lookback)
}

/// `Var[m_{t-1}(N) X_t]` for a Gaussian process.
pub fn variance<T: Scalar>(tp: &TheoryParams<T>, lookback: usize) -> Result<T> {
    if lookback == 0 {
        return Err(Error::InvalidLookback { lookback, len: 0 });
    }
    let n = T::from_usize_lossy(lookback);
    let (mu2, v) = (tp.mu * tp.mu, tp.variance);
    let s = lag_sum(tp, lookback);
    let c = off_diagonal_sum(tp, lookback);
    // sum_{i!=j} (rho(j) + rho(i)) = 2 (N - 1) S
    let cross = T::lit(2.0) * s + T::lit(2.0) * (n - T::one()) * s + c;
    let total = n * v * v + n * mu2 * v + n * n * v * mu2 + v * v * s * s + v * v * c + mu2 * v * cross;
    let var = total / (n * n);
    if !(var > T::zero()) {
        return Err(Error::NonPositiveVariance {
            lookback,
            value: var.to_f64_lossy(),
        });
    }
    Ok(var)
}

/// Expected return over standard deviation.
pub fn theoretical_sr<T: Scalar>(tp: &TheoryParams<T>, lookback: usize) -> Result<T> {
    Ok(expected_return(tp, lookback) / variance(tp, lookback)?.sqrt())
}

/// Sharpe ratio with no autocorrelation: `mu^2 / sqrt(V mu^2 + V^2/N + mu^2 V/N)`.
pub fn sr_case1<T: Scalar>(mu: T, variance: T, lookback: usize) -> T {
    let n = T::from_usize_lossy(lookback);
    let mu2 = mu * mu;
    mu2 / (variance * mu2 + variance * variance / n + mu2 * variance / n).sqrt()
}

/// Sharpe ratio with zero drift. Does not depend on the variance.
///
/// `rho[k - 1]` is the lag-`k` autocorrelation; missing lags are zero.
pub fn sr_case2<T: Scalar>(rho: &[T], lookback: usize) -> T {
    let tp = TheoryParams {
        mu: T::zero(),
        variance: T::one(),
        rho: rho.to_vec(),
    };
    let s = lag_sum(&tp, lookback);
    let c = off_diagonal_sum(&tp, lookback);
    s / (T::from_usize_lossy(lookback) + s * s + c).sqrt()
}

/// Theoretical SR over a grid of look-backs. Checks positive definiteness once
/// at the largest look-back, which covers every smaller one.
pub fn theoretical_curve<T: Scalar>(tp: &TheoryParams<T>, lookbacks: &[usize]) -> Result<SweepCurve<T>> {
    tp.validate()?;
    if let Some(&max_n) = lookbacks.iter().max() {
        tp.check_positive_definite(max_n)?;
    }
    let values = lookbacks
        .iter()
        .map(|&n| theoretical_sr(tp, n))
        .collect::<Result<Vec<_>>>()?;
    SweepCurve::new(lookbacks.to_vec(), values, Statistic::SharpeRatio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Literal double sums, term for term.
    fn variance_by_double_sums(tp: &TheoryParams<f64>, n: usize) -> f64 {
        let (mu, v) = (tp.mu, tp.variance);
        let nf = n as f64;
        let s: f64 = (1..=n).map(|i| tp.rho_at(i)).sum();
        let mut c = 0.0;
        let mut cross = 0.0;
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    c += tp.rho_at(i.abs_diff(j));
                    cross += tp.rho_at(j) + tp.rho_at(i.abs_diff(j)) + tp.rho_at(i);
                }
            }
        }
        (nf * v * v
            + nf * mu * mu * v
            + nf * nf * v * mu * mu
            + v * v * s * s
            + v * v * c
            + mu * mu * v * (2.0 * s + cross))
            / (nf * nf)
    }

    #[test]
    fn expected_return_examples() {
        let iid = TheoryParams::iid(0.3, 2.0);
        assert_relative_eq!(expected_return(&iid, 7), 0.09, epsilon = 1e-15);
        let tp = TheoryParams::new(0.0, 1.0, vec![0.1]).unwrap();
        assert_relative_eq!(expected_return(&tp, 1), 0.1);
        let tp = TheoryParams::new(0.05, 1.0, vec![0.05, 0.02]).unwrap();
        assert_relative_eq!(expected_return(&tp, 2), 0.0375, epsilon = 1e-15);
    }

    #[test]
    fn variance_collapses() {
        let tp = TheoryParams::iid(0.0, 1.7);
        assert_relative_eq!(variance(&tp, 4).unwrap(), 1.7 * 1.7 / 4.0, epsilon = 1e-15);
        let tp = TheoryParams::iid(0.4, 1.7);
        assert_relative_eq!(variance(&tp, 1).unwrap(), 1.7 * 1.7 + 2.0 * 0.16 * 1.7, epsilon = 1e-14);
    }

    #[test]
    fn variance_matches_literal_double_sums() {
        let tp = TheoryParams::new(0.1, 1.3, vec![0.05, -0.02, 0.04, 0.01]).unwrap();
        for n in 1..30 {
            assert_relative_eq!(
                variance(&tp, n).unwrap(),
                variance_by_double_sums(&tp, n),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn variance_matches_gaussian_product_moments() {
        // Independent route: for jointly Gaussian (Y, M),
        // Var(YM) = Var Y Var M + Cov(Y,M)^2 + mu_M^2 Var Y + mu_Y^2 Var M + 2 mu_Y mu_M Cov(Y,M).
        let tp = TheoryParams::new(0.1, 1.0, vec![0.05, -0.02]).unwrap();
        for n in 1..12usize {
            let nf = n as f64;
            let var_m = (nf + 2.0 * (1..n).map(|d| (n - d) as f64 * tp.rho_at(d)).sum::<f64>()) / (nf * nf);
            let cov = (1..=n).map(|i| tp.rho_at(i)).sum::<f64>() / nf;
            let mu = tp.mu;
            let expected = var_m + cov * cov + mu * mu + mu * mu * var_m + 2.0 * mu * mu * cov;
            assert_relative_eq!(variance(&tp, n).unwrap(), expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn invalid_rho_rejected() {
        assert!(TheoryParams::new(0.0, 1.0, vec![1.0]).is_err());
        assert!(TheoryParams::new(0.0, 0.0, vec![]).is_err());
        let tp = TheoryParams {
            mu: 0.0,
            variance: 1.0,
            rho: vec![0.9, -0.9],
        };
        assert!(tp.check_positive_definite(2).is_err());
        assert!(theoretical_curve(&tp, &[1, 2]).is_err());
    }

    #[test]
    fn negative_variance_is_reported() {
        // N + S^2 + C = 4 + 0.81 - 5.4 < 0
        let tp = TheoryParams {
            mu: 0.0,
            variance: 1.0,
            rho: vec![-0.9],
        };
        assert!(matches!(
            variance(&tp, 4),
            Err(Error::NonPositiveVariance { lookback: 4, .. })
        ));
    }

    #[test]
    fn case_limits() {
        assert_relative_eq!(sr_case1(0.1, 1.0, 100_000_000), 0.1, max_relative = 1e-6);
        assert_eq!(sr_case1(0.0, 1.0, 5), 0.0);
        assert!((1..200).all(|n| sr_case1(0.1, 2.0, n + 1) > sr_case1(0.1, 2.0, n)));
        assert_eq!(sr_case2(&[0.0, 0.0], 4), 0.0);
        // 0.07 / sqrt(2 + 0.07^2 + 2 * 0.05)
        assert_relative_eq!(sr_case2(&[0.05, 0.02], 2), 0.07 / 2.1049f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn case2_is_variance_free() {
        for v in [0.1, 1.0, 2.0, 40.0] {
            let tp = TheoryParams::new(0.0, v, vec![0.05, 0.02]).unwrap();
            assert_relative_eq!(
                theoretical_sr(&tp, 2).unwrap(),
                sr_case2(&tp.rho, 2),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn f32_matches_f64() {
        let tp = TheoryParams::<f32>::new(0.05, 1.0, vec![0.05, 0.02]).unwrap();
        let tp64 = TheoryParams::<f64>::new(0.05, 1.0, vec![0.05, 0.02]).unwrap();
        let a = theoretical_sr(&tp, 10).unwrap() as f64;
        let b = theoretical_sr(&tp64, 10).unwrap();
        assert!((a - b).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn variance_positive_for_valid_params(
            mu in -0.5f64..0.5,
            v in 0.1f64..4.0,
            rho in proptest::collection::vec(-0.3f64..0.3, 0..6),
            n in 1usize..40,
        ) {
            let tp = TheoryParams::new(mu, v, rho).unwrap();
            prop_assume!(tp.check_positive_definite(n).is_ok());
            prop_assert!(variance(&tp, n).unwrap() > 0.0);
        }
    }
}
