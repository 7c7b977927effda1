use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};
use crate::series::{Frequency, ReturnSeries, Weekday};
use crate::Scalar;

/// Noise term of the oscillating-drift model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub enum OscNoise<T = f64> {
    /// IID `N(0, sigma^2)`.
    Iid { sigma: T },
    /// Zero-mean MA process with non-zero coefficients only at the target
    /// lags, solved so that the autocorrelation at each `(lag, rho)` target is
    /// met exactly; rescaled to variance `sigma^2`.
    Ma { sigma: T, targets: Vec<(usize, T)> },
}

impl<T: Scalar> OscNoise<T> {
    pub fn sigma(&self) -> T {
        match self {
            OscNoise::Iid { sigma } | OscNoise::Ma { sigma, .. } => *sigma,
        }
    }
}

/// `r(t) = mu + A sgn(sin(2 pi t / T)) + eps`, `t = 1..=length`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct OscSpec<T = f64> {
    pub mu: T,
    #[serde(rename = "A")]
    pub amplitude: T,
    #[serde(rename = "T")]
    pub period: T,
    pub noise: OscNoise<T>,
}

impl<T: Scalar> OscSpec<T> {
    pub fn new(mu: T, amplitude: T, period: T, noise: OscNoise<T>) -> Result<Self> {
        let spec = Self {
            mu,
            amplitude,
            period,
            noise,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Weekly defaults fitted to the normalized index: `mu = 0.075`,
    /// `A = 2 mu`, `T = 180`, IID noise with `sigma = 2 mu`.
    pub fn weekly_default() -> Self {
        let mu = T::lit(0.075);
        Self {
            mu,
            amplitude: T::lit(2.0) * mu,
            period: T::lit(180.0),
            noise: OscNoise::Iid {
                sigma: T::lit(2.0) * mu,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period >= T::lit(2.0)) {
            return Err(Error::InvalidInput(format!(
                "period T must be >= 2, got {}",
                self.period
            )));
        }
        if !self.mu.is_finite() || !self.amplitude.is_finite() {
            return Err(Error::InvalidInput("mu and A must be finite".into()));
        }
        if !(self.noise.sigma() > T::zero()) {
            return Err(Error::InvalidInput("noise sigma must be > 0".into()));
        }
        if let OscNoise::Ma { .. } = self.noise {
            self.ma_coefficients()?;
        }
        Ok(())
    }

    /// MA weights `(lag, theta)` including `(0, 1)`, before variance scaling.
    /// Empty for IID noise.
    pub fn ma_coefficients(&self) -> Result<Vec<(usize, T)>> {
        match &self.noise {
            OscNoise::Iid { .. } => Ok(Vec::new()),
            OscNoise::Ma { targets, .. } => solve_ma(targets),
        }
    }

    pub fn describe(&self) -> String {
        let noise = match &self.noise {
            OscNoise::Iid { sigma } => format!("iid sigma={sigma}"),
            OscNoise::Ma { sigma, targets } => format!("ma sigma={sigma} targets={targets:?}"),
        };
        format!(
            "oscillating mu={} A={} T={} noise: {noise}",
            self.mu, self.amplitude, self.period
        )
    }
}

/// `sgn(sin(2 pi t / T))` computed from the phase `frac(t / T)`: exactly zero
/// at phase 0 and 1/2.
pub fn square_wave<T: Scalar>(t: usize, period: T) -> T {
    let x = T::from_usize_lossy(t) / period;
    let phase = x - x.floor();
    let half = T::lit(0.5);
    if phase == T::zero() || phase == half {
        T::zero()
    } else if phase < half {
        T::one()
    } else {
        -T::one()
    }
}

/// Autocorrelation at `lag` of the MA process with weights `coeffs`.
pub(crate) fn ma_autocorrelation<T: Scalar>(coeffs: &[(usize, T)], lag: usize) -> T {
    let var: T = coeffs.iter().map(|&(_, c)| c * c).sum();
    let mut cov = T::zero();
    for &(j, a) in coeffs {
        for &(k, b) in coeffs {
            if k == j + lag {
                cov = cov + a * b;
            }
        }
    }
    cov / var
}

fn solve_ma<T: Scalar>(targets: &[(usize, T)]) -> Result<Vec<(usize, T)>> {
    let mut lags: Vec<usize> = targets.iter().map(|t| t.0).collect();
    lags.sort_unstable();
    lags.dedup();
    if lags.len() != targets.len() || lags.first() == Some(&0) {
        return Err(Error::InvalidInput("MA target lags must be distinct and >= 1".into()));
    }
    for &(lag, rho) in targets {
        if !(rho.abs() < T::lit(0.5)) {
            return Err(Error::UnattainableAutocorrelation {
                lag,
                target: rho.to_f64_lossy(),
            });
        }
    }
    let mut coeffs: Vec<(usize, T)> = std::iter::once((0, T::one()))
        .chain(targets.iter().map(|&(lag, _)| (lag, T::zero())))
        .collect();
    let tol = T::epsilon() * T::lit(64.0);
    // Gauss-Seidel sweeps of one-dimensional bisection per target lag
    for _ in 0..500 {
        for (k, &(lag, target)) in targets.iter().enumerate() {
            let idx = k + 1;
            let f = |c: T, coeffs: &mut Vec<(usize, T)>| {
                coeffs[idx].1 = c;
                ma_autocorrelation(coeffs, lag) - target
            };
            let (mut lo, mut hi) = (-T::one(), T::one());
            let (flo, fhi) = (f(lo, &mut coeffs), f(hi, &mut coeffs));
            if flo.signum() == fhi.signum() {
                return Err(Error::UnattainableAutocorrelation {
                    lag,
                    target: target.to_f64_lossy(),
                });
            }
            for _ in 0..200 {
                let mid = (lo + hi) * T::lit(0.5);
                if f(mid, &mut coeffs).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= T::epsilon() {
                    break;
                }
            }
            coeffs[idx].1 = (lo + hi) * T::lit(0.5);
        }
        let worst = targets
            .iter()
            .map(|&(lag, target)| (ma_autocorrelation(&coeffs, lag) - target).abs())
            .fold(T::zero(), T::max);
        if worst <= tol {
            return Ok(coeffs);
        }
    }
    let (lag, target) = targets
        .iter()
        .copied()
        .max_by(|a, b| {
            let ea = (ma_autocorrelation(&coeffs, a.0) - a.1).abs();
            let eb = (ma_autocorrelation(&coeffs, b.0) - b.1).abs();
            ea.partial_cmp(&eb).unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("non-empty targets");
    Err(Error::UnattainableAutocorrelation {
        lag,
        target: target.to_f64_lossy(),
    })
}

pub(crate) fn generate_with<T: Scalar>(
    spec: &OscSpec<T>,
    length: usize,
    rng: &mut StreamRng,
) -> Result<ReturnSeries<T>> {
    let coeffs = spec.ma_coefficients()?;
    let sigma = spec.noise.sigma();
    let max_lag = coeffs.iter().map(|c| c.0).max().unwrap_or(0);
    let scale = if coeffs.is_empty() {
        sigma
    } else {
        sigma / coeffs.iter().map(|&(_, c)| c * c).sum::<T>().sqrt()
    };
    let innovations: Vec<T> = (0..length + max_lag).map(|_| T::standard_normal(rng)).collect();
    let values = (1..=length)
        .map(|t| {
            let i = t - 1 + max_lag;
            let eps = if coeffs.is_empty() {
                innovations[i]
            } else {
                coeffs.iter().map(|&(lag, c)| c * innovations[i - lag]).sum()
            };
            spec.mu + spec.amplitude * square_wave(t, spec.period) + scale * eps
        })
        .collect();
    Ok(ReturnSeries::synthetic(values, Frequency::Weekly(Weekday::Fri)))
}

/// Simulates the oscillating-drift model for `t = 1..=length`.
pub fn oscillating_drift_generate<T: Scalar>(spec: &OscSpec<T>, length: usize, seed: u64) -> Result<ReturnSeries<T>> {
    spec.validate()?;
    if length == 0 {
        return Err(Error::InvalidInput("length must be >= 1".into()));
    }
    generate_with(spec, length, &mut rng::seeded(seed))
}
