//! Generator for the bundled 27-alternative example scenario.
//!
//! The scenario realizes a classic portfolio shape: expected social cost
//! traces a parabola over a grid of catastrophe probabilities, with its
//! minimum at the third-lowest probability, so exactly two rivals sit to
//! the "northwest" of the optimum (lower probability, higher cost) and
//! everything else is sub-optimal. Good-lifecycle cost trends upward with
//! probability, giving the documented positive correlation between the two.
//!
//! Rather than shipping hand-picked numbers, the fixture is generated from
//! a seed (deterministic parametric curve plus seeded jitter) and then
//! *verified*: [`generate_fig3_fixture`] re-derives the claimed geometry —
//! unique optimum, exactly two safer rivals, no rival at or below the
//! optimal cost, positive probability/cost correlation — and fails loudly
//! with [`FixtureGeometryError`] if any part does not hold for the given
//! seed. [`DEFAULT_FIXTURE_SEED`] is pinned as known-good and re-asserted
//! by the test suite.

use std::collections::BTreeMap;

use margins::{
    classify_portfolio, split_stream, validate_scenario, Alternative, CostDistribution,
    EstimationConfig, Label, Scenario, WelfareFunction,
};

use crate::scenario::{ScenarioDocument, FORMAT_VERSION};

/// Pinned known-good seed for the bundled fixture.
pub const DEFAULT_FIXTURE_SEED: u64 = 0x5AFE_C0DE;

/// Number of alternatives the fixture always contains.
pub const FIXTURE_ALTERNATIVES: usize = 27;

/// Index (in probability order) of the intended optimum; the two entries
/// below it form the "northwest" pair.
const OPTIMAL_INDEX: usize = 2;

/// The generated geometry did not survive its verification pass.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("fixture geometry does not hold for seed {seed:#x}: {message}")]
pub struct FixtureGeometryError {
    pub seed: u64,
    pub message: String,
}

/// Generates the 27-alternative example scenario for a seed and verifies
/// its geometry before returning it.
pub fn generate_fig3_fixture(seed: u64) -> Result<ScenarioDocument, FixtureGeometryError> {
    let scenario = build_scenario(seed);
    verify_geometry(seed, &scenario)?;

    let mut metadata = BTreeMap::new();
    metadata.insert(
        "title".to_string(),
        "Twenty-seven candidate protective systems".to_string(),
    );
    metadata.insert(
        "description".to_string(),
        "Synthetic portfolio over a catastrophe-probability grid with seeded jitter: \
         one socially optimal alternative, two safer (super-optimal) rivals, and a \
         positive probability/cost trend."
            .to_string(),
    );

    Ok(ScenarioDocument {
        format_version: FORMAT_VERSION.to_string(),
        metadata,
        scenario,
    })
}

fn build_scenario(seed: u64) -> Scenario {
    // Probability grid and the parabola minimum on it.
    const P_BASE: f64 = 0.02;
    const P_STEP: f64 = 0.0135;
    const P_STAR: f64 = P_BASE + P_STEP * OPTIMAL_INDEX as f64;
    // Expected-social-cost parabola: the 5000 curvature makes one grid
    // step cost ~0.91, comfortably above the +/-0.3 jitter, so the argmin
    // stays put for every seed.
    const COST_FLOOR: f64 = 60.0;
    const CURVATURE: f64 = 5000.0;
    // Good-lifecycle cost trend: slope 30 over the grid dominates the
    // jitter in aggregate, producing a clearly positive correlation.
    const GOOD_BASE: f64 = 20.0;
    const GOOD_SLOPE: f64 = 30.0;
    const JITTER: f64 = 0.3;

    let mut jitter = split_stream(seed, "fig3-fixture", 0);
    let mut draw = move || (jitter.next_f64() * 2.0 - 1.0) * JITTER;

    let alternatives = (0..FIXTURE_ALTERNATIVES)
        .map(|i| {
            let p = P_BASE + P_STEP * i as f64;
            let total = COST_FLOOR + CURVATURE * (p - P_STAR) * (p - P_STAR) + draw();
            let c_good = GOOD_BASE + GOOD_SLOPE * p + draw();
            // Solve total = c_good + (c_fail - c_good) * p for c_fail; the
            // parabola floor keeps total - c_good > 28, so premiums stay
            // strictly positive.
            let c_fail = c_good + (total - c_good) / p;
            Alternative {
                id: format!("alt-{:02}", i + 1).into(),
                p_cat: p,
                cost_good: CostDistribution::PointMass { value: c_good },
                cost_fail: CostDistribution::PointMass { value: c_fail },
            }
        })
        .collect();

    Scenario {
        alternatives,
        welfare: WelfareFunction::linear(),
        seed,
        samples_per_alternative: 100_000,
    }
}

/// Re-derives every geometric claim the fixture makes; any failure is
/// reported instead of shipped.
fn verify_geometry(seed: u64, scenario: &Scenario) -> Result<(), FixtureGeometryError> {
    let fail = |message: String| FixtureGeometryError { seed, message };

    let violations = validate_scenario(scenario);
    if !violations.is_empty() {
        return Err(fail(format!(
            "generated scenario is invalid: {}",
            violations[0]
        )));
    }

    let analysis = classify_portfolio(scenario, &EstimationConfig::for_scenario(scenario))
        .map_err(|err| fail(format!("classification failed: {err}")))?;

    let optimal = analysis.optimal();
    let expected_optimal = &scenario.alternatives[OPTIMAL_INDEX].id;
    if &analysis.optimal_id != expected_optimal {
        return Err(fail(format!(
            "optimum landed on `{}` instead of `{expected_optimal}`",
            analysis.optimal_id
        )));
    }

    // (d) / south-exclusion, strictly: every rival costs strictly more.
    for eval in &analysis.evaluations {
        if eval.id != analysis.optimal_id
            && eval.expected_social_cost <= optimal.expected_social_cost
        {
            return Err(fail(format!(
                "rival `{}` does not lie strictly above the optimum ({} <= {})",
                eval.id, eval.expected_social_cost, optimal.expected_social_cost
            )));
        }
    }

    // (c): exactly two alternatives strictly safer than the optimum.
    let super_optimal = analysis
        .labels
        .values()
        .filter(|label| **label == Label::SuperOptimal)
        .count();
    if super_optimal != 2 {
        return Err(fail(format!(
            "expected exactly 2 super-optimal alternatives, found {super_optimal}"
        )));
    }

    // Premiums must stay positive so every bound line is well-defined.
    if let Some(bad) = analysis.evaluations.iter().find(|e| e.c_premium <= 0.0) {
        return Err(fail(format!(
            "alternative `{}` has nonpositive catastrophe premium {}",
            bad.id, bad.c_premium
        )));
    }

    // (a): positive correlation between pCat and good-lifecycle cost.
    let correlation = pearson(
        analysis.evaluations.iter().map(|e| e.p_cat),
        analysis.evaluations.iter().map(|e| e.c_good),
    );
    // Written positively so a NaN correlation also fails the check.
    if correlation > 0.5 {
        Ok(())
    } else {
        Err(fail(format!(
            "probability/cost correlation {correlation} is not clearly positive"
        )))
    }
}

fn pearson(xs: impl Iterator<Item = f64>, ys: impl Iterator<Item = f64>) -> f64 {
    let pairs: Vec<(f64, f64)> = xs.zip(ys).collect();
    let n = pairs.len() as f64;
    let mean_x = pairs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = pairs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (x, y) in &pairs {
        cov += (x - mean_x) * (y - mean_y);
        var_x += (x - mean_x) * (x - mean_x);
        var_y += (y - mean_y) * (y - mean_y);
    }
    cov / (var_x * var_y).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{parse_scenario, serialize_scenario};

    #[test]
    fn pinned_seed_generates_verified_geometry() {
        let doc = generate_fig3_fixture(DEFAULT_FIXTURE_SEED).unwrap();
        assert_eq!(doc.scenario.alternatives.len(), FIXTURE_ALTERNATIVES);
        assert_eq!(doc.scenario.seed, DEFAULT_FIXTURE_SEED);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_fig3_fixture(DEFAULT_FIXTURE_SEED).unwrap();
        let b = generate_fig3_fixture(DEFAULT_FIXTURE_SEED).unwrap();
        assert_eq!(a, b);
        assert_eq!(serialize_scenario(&a), serialize_scenario(&b));
    }

    #[test]
    fn fixture_round_trips_through_the_file_format() {
        let doc = generate_fig3_fixture(DEFAULT_FIXTURE_SEED).unwrap();
        let text = serialize_scenario(&doc);
        let reparsed = parse_scenario(text.as_bytes()).unwrap();
        assert_eq!(doc, reparsed);
    }

    #[test]
    fn classification_counts_match_the_intended_shape() {
        let doc = generate_fig3_fixture(DEFAULT_FIXTURE_SEED).unwrap();
        let analysis = classify_portfolio(
            &doc.scenario,
            &EstimationConfig::for_scenario(&doc.scenario),
        )
        .unwrap();
        let mut counts = [0usize; 3];
        for label in analysis.labels.values() {
            match label {
                Label::SociallyOptimal => counts[0] += 1,
                Label::SuperOptimal => counts[1] += 1,
                Label::SubOptimal => counts[2] += 1,
            }
        }
        assert_eq!(counts, [1, 2, 24]);
        // No rival at or below the optimal cost.
        let best = analysis.optimal().expected_social_cost;
        let below = analysis
            .evaluations
            .iter()
            .filter(|e| e.expected_social_cost < best)
            .count();
        assert_eq!(below, 0);
    }

    #[test]
    fn geometry_holds_across_many_seeds() {
        // The construction is designed to survive any seed; spot-check a
        // spread so the pinned seed is not a lucky draw.
        for seed in (0..64u64).map(|i| i * 0x9E37_79B9) {
            generate_fig3_fixture(seed).unwrap_or_else(|err| {
                panic!("seed {seed:#x} failed geometry: {err}");
            });
        }
    }
}
