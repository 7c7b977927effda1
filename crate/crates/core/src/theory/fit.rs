//! Least-squares fit of `(mu, rho(1..L))` to an empirical SR curve with the
//! variance held fixed.
//!
//! Autocorrelations are optimized as `rho = tanh(u)` so they stay in
//! `(-1, 1)`. Each start runs Levenberg-Marquardt with a forward-difference
//! Jacobian; starts run in parallel and the lowest residual wins (lowest start
//! index on ties).

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{theoretical_sr, TheoryParams};
use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::rng;
use crate::strategy::{Statistic, SweepCurve};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Converged once the relative cost decrease of an accepted step falls
    /// below this.
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            seed: 0,
            max_iterations: 2000,
            tolerance: 1e-14,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult<T = f64> {
    /// Fitted parameters; `mu` is reported non-negative since the SR only
    /// depends on `mu^2`.
    pub params: TheoryParams<T>,
    /// `sqrt(sum (theory - empirical)^2)`.
    pub residual_norm: T,
    /// Residual norm after every accepted step of the winning start.
    pub residual_history: Vec<T>,
    pub best_start: usize,
    pub converged_starts: usize,
    pub iterations: usize,
    pub fitted: SweepCurve<T>,
}

/// Residual assigned when the model is infeasible at a parameter vector.
const PENALTY: f64 = 1e3;

struct Problem<'a, T> {
    lookbacks: &'a [usize],
    targets: &'a [T],
    variance: T,
    lags: usize,
}

impl<T: Scalar> Problem<'_, T> {
    fn params(&self, theta: &[T]) -> TheoryParams<T> {
        TheoryParams {
            mu: theta[0],
            variance: self.variance,
            rho: theta[1..=self.lags].iter().map(|u| u.tanh()).collect(),
        }
    }

    fn residuals(&self, theta: &[T]) -> Vec<T> {
        let tp = self.params(theta);
        self.lookbacks
            .iter()
            .zip(self.targets)
            .map(|(&n, &y)| match theoretical_sr(&tp, n) {
                Ok(v) if v.is_finite() => v - y,
                _ => T::lit(PENALTY),
            })
            .collect()
    }
}

fn cost<T: Scalar>(r: &[T]) -> T {
    r.iter().map(|&v| v * v).sum()
}

struct StartOutcome<T> {
    theta: Vec<T>,
    cost: T,
    history: Vec<T>,
    converged: bool,
    iterations: usize,
}

fn levenberg_marquardt<T: Scalar>(problem: &Problem<'_, T>, mut theta: Vec<T>, opts: &FitOptions) -> StartOutcome<T> {
    let p = theta.len();
    let mut r = problem.residuals(&theta);
    let mut c = cost(&r);
    let mut history = vec![c.sqrt()];
    let mut lambda = T::lit(1e-3);
    let tol = T::lit(opts.tolerance);
    let h_rel = T::epsilon().sqrt();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        iterations += 1;
        if c <= T::min_positive_value() {
            converged = true;
            break;
        }
        // forward-difference Jacobian
        let mut jac = Matrix::zeros(r.len(), p);
        for k in 0..p {
            let h = h_rel * theta[k].abs().max(T::one());
            let mut shifted = theta.clone();
            shifted[k] = shifted[k] + h;
            let rs = problem.residuals(&shifted);
            for (i, (a, b)) in rs.iter().zip(&r).enumerate() {
                jac.set(i, k, (*a - *b) / h);
            }
        }
        let jtj = jac.gram();
        let grad = jac.t_mul_vec(&r);
        let diag_floor = T::lit(1e-12);

        let mut accepted = false;
        for _ in 0..60 {
            let mut a = jtj.clone();
            for k in 0..p {
                let d = jtj.get(k, k).max(diag_floor);
                a.set(k, k, jtj.get(k, k) + lambda * d);
            }
            let step = match Cholesky::new(&a) {
                Ok(ch) => ch.solve(&grad),
                Err(_) => {
                    lambda = lambda * T::lit(10.0);
                    continue;
                }
            };
            let trial: Vec<T> = theta.iter().zip(&step).map(|(&t, &s)| t - s).collect();
            let r_trial = problem.residuals(&trial);
            let c_trial = cost(&r_trial);
            if c_trial.is_finite() && c_trial < c {
                let decrease = (c - c_trial) / c;
                theta = trial;
                r = r_trial;
                c = c_trial;
                history.push(c.sqrt());
                lambda = (lambda / T::lit(3.0)).max(T::lit(1e-12));
                accepted = true;
                if decrease < tol {
                    converged = true;
                }
                break;
            }
            lambda = lambda * T::lit(4.0);
            if lambda > T::lit(1e16) {
                break;
            }
        }
        if !accepted {
            // no descent direction left: stationary point to working precision
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    StartOutcome {
        theta,
        cost: c,
        history,
        converged,
        iterations,
    }
}

/// Fits `(mu, rho(1..=lags))` to `empirical` (an SR curve) with `V` fixed.
pub fn fit_theory_params<T: Scalar>(
    empirical: &SweepCurve<T>,
    variance: T,
    lags: usize,
    opts: &FitOptions,
) -> Result<FitResult<T>> {
    empirical.validate()?;
    if empirical.statistic != Statistic::SharpeRatio {
        return Err(Error::InvalidInput("fit needs a Sharpe ratio curve".into()));
    }
    if empirical.len() < lags + 1 {
        return Err(Error::TooShort {
            needed: lags + 1,
            got: empirical.len(),
        });
    }
    if !(variance > T::zero()) {
        return Err(Error::InvalidInput("fit variance must be > 0".into()));
    }
    if opts.starts == 0 {
        return Err(Error::InvalidInput("at least one start is required".into()));
    }
    let annual = T::lit(empirical.annualization);
    let targets: Vec<T> = empirical.values.iter().map(|&v| v / annual).collect();
    let problem = Problem {
        lookbacks: &empirical.lookbacks,
        targets: &targets,
        variance,
        lags,
    };
    // the large-N SR approaches |mu| / sqrt(V)
    let tail = targets.last().copied().unwrap_or_else(T::zero);
    let mu_guess = (tail.abs() * variance.sqrt()).max(T::lit(1e-3));

    let outcomes: Vec<StartOutcome<T>> = (0..opts.starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = rng::stream(opts.seed, start as u64);
            let mut theta = Vec::with_capacity(lags + 1);
            let jitter: f64 = if start == 0 { 1.0 } else { rng.random_range(0.25..2.0) };
            theta.push(mu_guess * T::lit(jitter));
            for _ in 0..lags {
                let u: f64 = if start == 0 { 0.0 } else { rng.random_range(-0.1..0.1) };
                theta.push(T::lit(u));
            }
            levenberg_marquardt(&problem, theta, opts)
        })
        .collect();

    let (best_start, best) = outcomes
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cost.partial_cmp(&b.1.cost).unwrap_or(std::cmp::Ordering::Equal))
        .expect("at least one start");
    let converged_starts = outcomes.iter().filter(|o| o.converged).count();
    if converged_starts == 0 || !best.cost.is_finite() {
        return Err(Error::NoConvergence {
            best_params: best.theta.iter().map(|v| v.to_f64_lossy()).collect(),
            best_residual: best.cost.sqrt().to_f64_lossy(),
            residual_history: best.history.iter().map(|v| v.to_f64_lossy()).collect(),
        });
    }
    let mut params = problem.params(&best.theta);
    params.mu = params.mu.abs();
    let fitted_values = empirical
        .lookbacks
        .iter()
        .map(|&n| theoretical_sr(&params, n).map(|v| v * annual))
        .collect::<Result<Vec<_>>>()?;
    let mut fitted = SweepCurve::new(empirical.lookbacks.clone(), fitted_values, Statistic::SharpeRatio)?;
    fitted.annualization = empirical.annualization;
    Ok(FitResult {
        params,
        residual_norm: best.cost.sqrt(),
        residual_history: best.history.clone(),
        best_start,
        converged_starts,
        iterations: best.iterations,
        fitted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::theoretical_curve;

    fn max_param_error(a: &TheoryParams<f64>, b: &TheoryParams<f64>) -> f64 {
        let mut err = (a.mu.abs() - b.mu.abs()).abs();
        for k in 1..=a.rho.len().max(b.rho.len()) {
            err = err.max((a.rho_at(k) - b.rho_at(k)).abs());
        }
        err
    }

    #[test]
    fn round_trip_recovers_parameters() {
        let v = 1.43f64 * 1.43;
        let truth = TheoryParams::new(
            0.075,
            v,
            vec![
                0.057, 0.016, 0.007, -0.032, 0.01, -0.015, 0.02, 0.0, -0.01, 0.012, 0.005, -0.008,
            ],
        )
        .unwrap();
        let ns: Vec<usize> = (1..=43).collect();
        let curve = theoretical_curve(&truth, &ns).unwrap();
        let fit = fit_theory_params(&curve, v, 12, &FitOptions::default()).unwrap();
        assert!(fit.residual_norm < 1e-6, "residual {}", fit.residual_norm);
        assert!(max_param_error(&fit.params, &truth) < 1e-3, "{:?}", fit.params);
        assert_eq!(fit.fitted.len(), 43);
    }

    #[test]
    fn iid_curve_fits_zero_autocorrelation() {
        let truth = TheoryParams::<f64>::iid(0.1, 1.0);
        let ns: Vec<usize> = (1..=30).collect();
        let curve = theoretical_curve(&truth, &ns).unwrap();
        let fit = fit_theory_params(&curve, 1.0, 5, &FitOptions::default()).unwrap();
        assert!(fit.params.rho.iter().all(|r| r.abs() < 1e-3), "{:?}", fit.params.rho);
        assert!((fit.params.mu - 0.1).abs() < 1e-3);
    }

    #[test]
    fn too_few_points_rejected() {
        let curve = SweepCurve::new(vec![1, 2, 3], vec![0.1, 0.1, 0.1], Statistic::SharpeRatio).unwrap();
        assert!(matches!(
            fit_theory_params(&curve, 1.0, 12, &FitOptions::default()),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn non_convergence_carries_best_so_far() {
        let truth = TheoryParams::new(0.05, 1.0, vec![0.05, 0.02]).unwrap();
        let curve = theoretical_curve(&truth, &(1..=10).collect::<Vec<_>>()).unwrap();
        let opts = FitOptions {
            max_iterations: 1,
            tolerance: 0.0,
            ..FitOptions::default()
        };
        match fit_theory_params(&curve, 1.0, 2, &opts) {
            Err(Error::NoConvergence {
                best_params,
                residual_history,
                ..
            }) => {
                assert_eq!(best_params.len(), 3);
                assert!(!residual_history.is_empty());
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let truth = TheoryParams::new(0.05, 1.0, vec![0.05, -0.02, 0.01]).unwrap();
        let curve = theoretical_curve(&truth, &(1..=15).collect::<Vec<_>>()).unwrap();
        let opts = FitOptions {
            seed: 9,
            ..FitOptions::default()
        };
        let a = fit_theory_params(&curve, 1.0, 3, &opts).unwrap();
        let b = fit_theory_params(&curve, 1.0, 3, &opts).unwrap();
        assert_eq!(a, b);
    }
}
