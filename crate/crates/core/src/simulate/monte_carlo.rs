use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GeneratorSpec;
use crate::error::{Error, Result};
use crate::rng;
use crate::strategy::{average_curves, sweep, Statistic, StrategyMode, SweepCurve};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSweepResult<T = f64> {
    /// Pointwise mean over realizations with standard errors.
    pub curve: SweepCurve<T>,
    pub realizations: usize,
    pub length: usize,
    pub seed: u64,
    pub generator: String,
}

/// Runs `n_realizations` independent simulations and averages their SR
/// sweeps. Realization `i` draws from RNG stream `(seed, i)`.
pub fn monte_carlo_sweep<T: Scalar>(
    generator: &GeneratorSpec<T>,
    n_realizations: usize,
    length: usize,
    lookbacks: &[usize],
    mode: StrategyMode,
    seed: u64,
) -> Result<McSweepResult<T>> {
    generator.validate()?;
    if n_realizations < 2 {
        return Err(Error::InvalidInput("need at least two realizations".into()));
    }
    let curves = (0..n_realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, i as u64);
            let series = generator.generate_with(length, &mut rng)?;
            sweep(&series, lookbacks, mode, Statistic::SharpeRatio)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(McSweepResult {
        curve: average_curves(&curves)?,
        realizations: n_realizations,
        length,
        seed,
        generator: generator.describe(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{ArmaSpec, OscNoise, OscSpec};

    fn iid_spec() -> GeneratorSpec<f64> {
        GeneratorSpec::Arma(ArmaSpec::new(0.05, vec![], vec![], 1.0).unwrap())
    }

    #[test]
    fn same_seed_bit_identical() {
        let ns: Vec<usize> = (1..=10).collect();
        let osc = GeneratorSpec::Oscillating(
            OscSpec::new(
                0.05,
                0.1,
                40.0,
                OscNoise::Ma {
                    sigma: 0.2,
                    targets: vec![(1, 0.05)],
                },
            )
            .unwrap(),
        );
        for g in [iid_spec(), osc] {
            let a = monte_carlo_sweep(&g, 8, 300, &ns, StrategyMode::Linear, 42).unwrap();
            let b = monte_carlo_sweep(&g, 8, 300, &ns, StrategyMode::Linear, 42).unwrap();
            assert_eq!(a, b);
            assert!(a.curve.standard_errors.as_ref().unwrap().iter().all(|s| *s > 0.0));
        }
    }

    #[test]
    fn standard_errors_shrink_with_realizations() {
        let ns = [1usize, 5, 10];
        let small = monte_carlo_sweep(&iid_spec(), 50, 500, &ns, StrategyMode::Linear, 1).unwrap();
        let large = monte_carlo_sweep(&iid_spec(), 200, 500, &ns, StrategyMode::Linear, 1).unwrap();
        let se_s = small.curve.standard_errors.unwrap();
        let se_l = large.curve.standard_errors.unwrap();
        for (s, l) in se_s.iter().zip(&se_l) {
            // expected ratio 2
            let ratio = s / l;
            assert!((1.6..2.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn single_realization_rejected() {
        assert!(monte_carlo_sweep(&iid_spec(), 1, 100, &[1], StrategyMode::Linear, 0).is_err());
    }

    #[test]
    fn generator_json_schema() {
        let json = r#"{"model":"arma","phi0":0.9,"phi":[0.95,-0.6],"theta":[1.4,0.5],"sigma2":0.3}"#;
        let g: GeneratorSpec<f64> = serde_json::from_str(json).unwrap();
        assert!(matches!(&g, GeneratorSpec::Arma(s) if s.phi == vec![0.95, -0.6]));
        let back = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<GeneratorSpec<f64>>(&back).unwrap(), g);

        let json = r#"{"model":"oscillating","mu":0.075,"A":0.15,"T":180,"noise":{"ma":{"sigma":0.15,"targets":[[1,0.05],[20,0.08]]}}}"#;
        let g: GeneratorSpec<f64> = serde_json::from_str(json).unwrap();
        assert!(g.validate().is_ok());

        let err = serde_json::from_str::<GeneratorSpec<f64>>(r#"{"model":"arma","phi0":0.9}"#).unwrap_err();
        assert!(err.to_string().contains("sigma2"), "{err}");
    }
}
