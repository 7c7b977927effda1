use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};
use crate::series::{Frequency, ReturnSeries};
use crate::theory::TheoryParams;
use crate::Scalar;

/// `z_t = phi0 + sum phi_i z_{t-i} + e_t + sum theta_j e_{t-j}`, `e ~ N(0, sigma2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct ArmaSpec<T = f64> {
    pub phi0: T,
    #[serde(default)]
    pub phi: Vec<T>,
    #[serde(default)]
    pub theta: Vec<T>,
    pub sigma2: T,
}

impl<T: Scalar> ArmaSpec<T> {
    pub fn new(phi0: T, phi: Vec<T>, theta: Vec<T>, sigma2: T) -> Result<Self> {
        let spec = Self {
            phi0,
            phi,
            theta,
            sigma2,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > T::zero()) || !self.sigma2.is_finite() {
            return Err(Error::InvalidInput(format!("sigma2 must be > 0, got {}", self.sigma2)));
        }
        let all = std::iter::once(&self.phi0).chain(&self.phi).chain(&self.theta);
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("ARMA coefficients must be finite".into()));
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.phi.len()
    }

    pub fn q(&self) -> usize {
        self.theta.len()
    }

    /// Samples discarded before the returned series starts.
    pub fn burn_in(&self) -> usize {
        500.max(10 * (self.p() + self.q()))
    }

    /// Long-run mean `phi0 / (1 - sum phi)`.
    pub fn mean(&self) -> T {
        let s: T = self.phi.iter().copied().sum();
        self.phi0 / (T::one() - s)
    }

    pub fn describe(&self) -> String {
        format!(
            "ARMA({},{}) phi0={} phi={:?} theta={:?} sigma2={}",
            self.p(),
            self.q(),
            self.phi0,
            self.phi,
            self.theta,
            self.sigma2
        )
    }
}

pub(crate) fn generate_with<T: Scalar>(spec: &ArmaSpec<T>, length: usize, rng: &mut StreamRng) -> ReturnSeries<T> {
    let (p, q) = (spec.p(), spec.q());
    let burn = spec.burn_in();
    let total = burn + length;
    let sd = spec.sigma2.sqrt();
    // leading zeros stand in for the pre-sample history
    let pad = p.max(q);
    let mut z = vec![T::zero(); pad + total];
    let mut e = vec![T::zero(); pad + total];
    for t in pad..pad + total {
        let eps = sd * T::standard_normal(rng);
        e[t] = eps;
        let mut v = spec.phi0 + eps;
        for (i, &phi) in spec.phi.iter().enumerate() {
            v = v + phi * z[t - i - 1];
        }
        for (j, &theta) in spec.theta.iter().enumerate() {
            v = v + theta * e[t - j - 1];
        }
        z[t] = v;
    }
    ReturnSeries::synthetic(z.split_off(pad + burn), Frequency::Daily)
}

/// Simulates `length` observations after burn-in. Deterministic in `seed`.
pub fn arma_generate<T: Scalar>(spec: &ArmaSpec<T>, length: usize, seed: u64) -> Result<ReturnSeries<T>> {
    spec.validate()?;
    if length == 0 {
        return Err(Error::InvalidInput("length must be >= 1".into()));
    }
    Ok(generate_with(spec, length, &mut rng::seeded(seed)))
}

/// Outcome of the AR root check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stationarity<T = f64> {
    pub stationary: bool,
    /// Moduli of the roots of `1 - phi_1 x - ... - phi_p x^p`, ascending.
    pub root_moduli: Vec<T>,
}

/// Roots of `sum c_k x^k` (`coeffs[k] = c_k`, non-zero leading coefficient)
/// by Durand-Kerner iteration.
pub(crate) fn polynomial_roots<T: Scalar>(coeffs: &[T]) -> Vec<Complex<T>> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let monic: Vec<T> = coeffs.iter().map(|&c| c / lead).collect();
    // Cauchy bound on root moduli
    let radius = T::one() + monic[..degree].iter().map(|c| c.abs()).fold(T::zero(), T::max);
    let seed = Complex::new(T::lit(0.4), T::lit(0.9));
    let mut roots: Vec<Complex<T>> = (0..degree).map(|k| seed.powu(k as u32 + 1) * radius).collect();
    let eval = |x: Complex<T>| {
        monic
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * x + c)
    };
    for _ in 0..1000 {
        let mut shift = T::zero();
        for i in 0..degree {
            let mut denom = Complex::new(T::one(), T::zero());
            for j in 0..degree {
                if i != j {
                    denom = denom * (roots[i] - roots[j]);
                }
            }
            let delta = eval(roots[i]) / denom;
            roots[i] = roots[i] - delta;
            shift = shift.max(delta.norm());
        }
        if shift <= T::epsilon() * radius {
            break;
        }
    }
    roots
}

/// Stationary iff every root of the AR polynomial lies outside the unit
/// circle (modulus > 1 + 1e-9). `p = 0` is always stationary.
pub fn arma_is_stationary<T: Scalar>(spec: &ArmaSpec<T>) -> Stationarity<T> {
    let mut phi = spec.phi.clone();
    while phi.last().is_some_and(|v| *v == T::zero()) {
        phi.pop();
    }
    let mut coeffs = vec![T::one()];
    coeffs.extend(phi.iter().map(|&v| -v));
    let mut root_moduli: Vec<T> = polynomial_roots(&coeffs).iter().map(|r| r.norm()).collect();
    root_moduli.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let bound = T::one() + T::lit(1e-9);
    Stationarity {
        stationary: root_moduli.iter().all(|&m| m > bound),
        root_moduli,
    }
}

/// Exact `(mu, V, rho(1..=max_lag))` of a stationary ARMA process, from its
/// MA(infinity) weights.
pub fn arma_theory_params<T: Scalar>(spec: &ArmaSpec<T>, max_lag: usize) -> Result<TheoryParams<T>> {
    spec.validate()?;
    if !arma_is_stationary(spec).stationary {
        return Err(Error::InvalidInput("ARMA spec is not stationary".into()));
    }
    let mut psi = vec![T::one()];
    let tiny = T::epsilon() * T::lit(1e-3);
    let mut quiet = 0;
    while psi.len() < 200_000 {
        let j = psi.len();
        let mut v = spec.theta.get(j - 1).copied().unwrap_or_else(T::zero);
        for (i, &phi) in spec.phi.iter().enumerate() {
            if let Some(&past) = j.checked_sub(i + 1).and_then(|k| psi.get(k)) {
                v = v + phi * past;
            }
        }
        psi.push(v);
        quiet = if v.abs() < tiny { quiet + 1 } else { 0 };
        if j > spec.q() && quiet > spec.p().max(1) {
            break;
        }
    }
    let autocov = |k: usize| -> T {
        let terms = psi.len().saturating_sub(k);
        spec.sigma2 * (0..terms).map(|j| psi[j] * psi[j + k]).sum::<T>()
    };
    let gamma0 = autocov(0);
    TheoryParams::new(
        spec.mean(),
        gamma0,
        (1..=max_lag).map(|k| autocov(k) / gamma0).collect(),
    )
}
