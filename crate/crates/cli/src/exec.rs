//! Portfolio evaluation with optional worker parallelism.
//!
//! Every alternative draws from streams split off `(seed, id, purpose)`,
//! so evaluations are independent of scheduling; the only thing this
//! module has to preserve is output *order*, which `rayon`'s indexed
//! collect does. Results are therefore bit-identical for any worker count,
//! a property the acceptance suite pins down.

use margins::{
    evaluate_alternative, Error, EstimationConfig, Evaluation, PortfolioAnalysis, Scenario,
};
use rayon::prelude::*;

/// Evaluates every alternative, in scenario order, on `workers` threads
/// (sequentially when `workers <= 1`).
pub fn evaluate_portfolio(
    scenario: &Scenario,
    cfg: &EstimationConfig,
    workers: usize,
) -> Result<Vec<Evaluation>, Error> {
    if workers <= 1 {
        return scenario
            .alternatives
            .iter()
            .map(|a| evaluate_alternative(a, &scenario.welfare, cfg))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|err| Error::Param {
            context: "worker pool",
            message: err.to_string(),
        })?;
    pool.install(|| {
        scenario
            .alternatives
            .par_iter()
            .map(|a| evaluate_alternative(a, &scenario.welfare, cfg))
            .collect()
    })
}

/// [`margins::classify_portfolio`] with worker parallelism.
pub fn classify_portfolio_with_workers(
    scenario: &Scenario,
    cfg: &EstimationConfig,
    workers: usize,
) -> Result<PortfolioAnalysis, Error> {
    PortfolioAnalysis::from_evaluations(evaluate_portfolio(scenario, cfg, workers)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{generate_fig3_fixture, DEFAULT_FIXTURE_SEED};
    use margins::{classify_portfolio, Alternative, CostDistribution, WelfareFunction};

    fn mixed_scenario() -> Scenario {
        let alternatives = (0..6)
            .map(|i| Alternative {
                id: format!("alt-{i}").into(),
                p_cat: 0.05 + 0.1 * i as f64,
                cost_good: CostDistribution::Uniform {
                    lo: 5.0 + i as f64,
                    hi: 15.0 + i as f64,
                },
                cost_fail: CostDistribution::LogNormal {
                    mu: 4.0,
                    sigma: 0.3,
                },
            })
            .collect();
        Scenario {
            alternatives,
            welfare: WelfareFunction::linear(),
            seed: 99,
            samples_per_alternative: 20_000,
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let scenario = mixed_scenario();
        let cfg = EstimationConfig {
            target_stderr: 0.01,
            ..EstimationConfig::for_scenario(&scenario)
        };
        let sequential = classify_portfolio(&scenario, &cfg).unwrap();
        for workers in [1, 2, 8] {
            let parallel = classify_portfolio_with_workers(&scenario, &cfg, workers).unwrap();
            assert_eq!(parallel.optimal_id, sequential.optimal_id);
            assert_eq!(parallel.evaluations.len(), sequential.evaluations.len());
            for (p, s) in parallel.evaluations.iter().zip(&sequential.evaluations) {
                assert_eq!(p.id, s.id, "order must be preserved");
                assert_eq!(
                    p.expected_social_cost.to_bits(),
                    s.expected_social_cost.to_bits()
                );
                assert_eq!(p.stderr.to_bits(), s.stderr.to_bits());
            }
        }
    }

    #[test]
    fn parallel_exact_path_matches_sequential_on_the_fixture() {
        let doc = generate_fig3_fixture(DEFAULT_FIXTURE_SEED).unwrap();
        let cfg = EstimationConfig::for_scenario(&doc.scenario);
        let a = classify_portfolio_with_workers(&doc.scenario, &cfg, 1).unwrap();
        let b = classify_portfolio_with_workers(&doc.scenario, &cfg, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn estimation_errors_surface_from_parallel_runs() {
        let mut scenario = mixed_scenario();
        scenario.alternatives[3].cost_good = CostDistribution::LogNormal { mu: 0.0, sigma: 3.0 };
        let cfg = EstimationConfig {
            max_samples: 64,
            target_stderr: 1e-9,
            ..EstimationConfig::for_scenario(&scenario)
        };
        assert!(matches!(
            classify_portfolio_with_workers(&scenario, &cfg, 4),
            Err(Error::Estimation { .. })
        ));
    }
}
