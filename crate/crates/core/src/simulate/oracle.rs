//! Brute-force check of the closed-form moments: sample the exact
//! multivariate Gaussian `(X_{t-N}, ..., X_t)` and measure `m_{t-1}(N) X_t`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::rng;
use crate::theory::TheoryParams;
use crate::{compensated_sum, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate<T = f64> {
    pub mean: T,
    pub variance: T,
    pub mean_se: T,
    pub variance_se: T,
    pub samples: usize,
}

impl<T: Scalar> OracleEstimate<T> {
    pub fn sharpe(&self) -> T {
        self.mean / self.variance.sqrt()
    }
}

const CHUNKS: usize = 64;

/// Sample mean and variance of `m_{t-1}(N) X_t` from `n_samples` exact draws.
/// Deterministic in `seed` regardless of thread count.
pub fn brute_force_variance_oracle<T: Scalar>(
    tp: &TheoryParams<T>,
    lookback: usize,
    n_samples: usize,
    seed: u64,
) -> Result<OracleEstimate<T>> {
    tp.validate()?;
    if lookback == 0 || n_samples < 2 {
        return Err(Error::InvalidInput("need N >= 1 and at least two samples".into()));
    }
    let chol = Cholesky::new(&tp.correlation_matrix(lookback))?;
    let dim = lookback + 1;
    let sd = tp.variance.sqrt();
    let inv_n = T::one() / T::from_usize_lossy(lookback);
    let per_chunk = n_samples.div_ceil(CHUNKS);

    let samples: Vec<T> = (0..CHUNKS)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let count = per_chunk.min(n_samples.saturating_sub(chunk * per_chunk));
            let mut rng = rng::stream(seed, chunk as u64);
            let mut z = vec![T::zero(); dim];
            let mut x = vec![T::zero(); dim];
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                z.iter_mut().for_each(|v| *v = T::standard_normal(&mut rng));
                chol.transform(&z, &mut x);
                // index 0 is X_t, 1..=N are X_{t-1}..X_{t-N}
                let current = tp.mu + sd * x[0];
                let past: T = x[1..].iter().map(|&v| tp.mu + sd * v).sum();
                out.push(past * inv_n * current);
            }
            out
        })
        .collect();

    let n = T::from_usize_lossy(samples.len());
    let mean = compensated_sum(samples.iter().copied()) / n;
    let m2 = compensated_sum(samples.iter().map(|&s| (s - mean) * (s - mean))) / n;
    let m4 = compensated_sum(samples.iter().map(|&s| (s - mean).powi(4))) / n;
    Ok(OracleEstimate {
        mean,
        variance: m2,
        mean_se: (m2 / n).sqrt(),
        variance_se: ((m4 - m2 * m2).max(T::zero()) / n).sqrt(),
        samples: samples.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{expected_return, variance};

    #[test]
    fn iid_variance_quarter() {
        let tp = TheoryParams::<f64>::iid(0.0, 1.0);
        let est = brute_force_variance_oracle(&tp, 4, 400_000, 1).unwrap();
        assert!((est.variance - 0.25).abs() < 3.0 * est.variance_se);
        assert!(est.mean.abs() < 3.0 * est.mean_se);
    }

    #[test]
    fn case2_spot_sharpe() {
        let tp = TheoryParams::<f64>::new(0.0, 1.0, vec![0.05, 0.02]).unwrap();
        let est = brute_force_variance_oracle(&tp, 2, 1_000_000, 2).unwrap();
        let theory = crate::theory::sr_case2(&tp.rho, 2);
        // SE of a ratio of moments is dominated by the mean's SE here
        let se = est.mean_se / est.variance.sqrt();
        assert!((est.sharpe() - theory).abs() < 3.0 * se, "{} vs {theory}", est.sharpe());
    }

    #[test]
    fn small_case_matches_closed_form() {
        let tp = TheoryParams::<f64>::new(0.1, 1.0, vec![0.05, -0.02]).unwrap();
        let est = brute_force_variance_oracle(&tp, 3, 1_000_000, 3).unwrap();
        assert!((est.mean - expected_return(&tp, 3)).abs() < 3.0 * est.mean_se);
        assert!((est.variance - variance(&tp, 3).unwrap()).abs() < 3.0 * est.variance_se);
    }

    #[test]
    fn non_pd_rejected() {
        let tp = TheoryParams {
            mu: 0.0,
            variance: 1.0,
            rho: vec![0.9, -0.9],
        };
        assert!(matches!(
            brute_force_variance_oracle(&tp, 2, 100, 1),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn deterministic() {
        let tp = TheoryParams::new(0.1, 2.0, vec![0.1]).unwrap();
        let a = brute_force_variance_oracle(&tp, 5, 10_001, 7).unwrap();
        let b = brute_force_variance_oracle(&tp, 5, 10_001, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 10_001);
    }
}
