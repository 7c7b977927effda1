//! Seeded generators, stationarity checks and Monte Carlo validation.

mod adf;
mod arma;
mod monte_carlo;
mod oracle;
mod oscillating;

use serde::{Deserialize, Serialize};

pub use adf::{adf_test, AdfResult};
pub use arma::{arma_generate, arma_is_stationary, arma_theory_params, ArmaSpec, Stationarity};
pub use monte_carlo::{monte_carlo_sweep, McSweepResult};
pub use oracle::{brute_force_variance_oracle, OracleEstimate};
pub use oscillating::{oscillating_drift_generate, square_wave, OscNoise, OscSpec};

use crate::error::Result;
use crate::rng::StreamRng;
use crate::series::ReturnSeries;
use crate::Scalar;

/// Any generator the Monte Carlo harness can drive. Serialized with a
/// `"model"` tag: `{"model": "arma", ...}` or `{"model": "oscillating", ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub enum GeneratorSpec<T = f64> {
    Arma(ArmaSpec<T>),
    Oscillating(OscSpec<T>),
}

impl<T: Scalar> GeneratorSpec<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::Arma(s) => s.validate(),
            GeneratorSpec::Oscillating(s) => s.validate(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GeneratorSpec::Arma(s) => s.describe(),
            GeneratorSpec::Oscillating(s) => s.describe(),
        }
    }

    pub(crate) fn generate_with(&self, length: usize, rng: &mut StreamRng) -> Result<ReturnSeries<T>> {
        match self {
            GeneratorSpec::Arma(s) => Ok(arma::generate_with(s, length, rng)),
            GeneratorSpec::Oscillating(s) => oscillating::generate_with(s, length, rng),
        }
    }
}
