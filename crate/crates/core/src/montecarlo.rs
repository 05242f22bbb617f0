//! Estimation engines for conditional expectations `E[w(C) | χ]`.
//!
//! Finite-support distributions (point mass, discrete) are integrated by
//! exact weighted sum. Continuous distributions are estimated by seeded
//! Monte Carlo with an online (Welford) mean/variance accumulator and a
//! relative-stderr stopping rule. Failing to reach the target at the sample
//! cap is *not* an error here — the [`Estimate`] simply reports a standard
//! error above target (see [`Estimate::meets_target`]); deciding whether
//! that is fatal belongs to the caller, and the evaluation layer treats it
//! as one.
//!
//! [`brute_force_expected_social_cost`] is a deliberately naive oracle:
//! it enumerates the full outcome space `{good, fail} × support` on its
//! own, sharing no arithmetic with the evaluation path, so tests can pit
//! the two against each other.

use crate::alternatives::{Alternative, CostDistribution};
use crate::error::Error;
use crate::math;
use crate::rng::{split_stream, RandomStream};
use crate::welfare::WelfareFunction;

use alloc::format;

/// Stream purpose tag for the good-lifecycle conditional estimate.
pub const PURPOSE_COST_GOOD: u32 = 0;
/// Stream purpose tag for the catastrophe conditional estimate.
pub const PURPOSE_COST_FAIL: u32 = 1;

/// Absolute stopping-rule fallback: when the running mean is near zero the
/// relative target `targetStderr * |value|` collapses, so the rule bottoms
/// out at this absolute standard error.
pub const ABSOLUTE_STDERR_FLOOR: f64 = 1e-9;

/// Default Monte Carlo sample cap per conditional estimate.
pub const DEFAULT_MAX_SAMPLES: u64 = 100_000;
/// Default relative standard-error target.
pub const DEFAULT_TARGET_STDERR: f64 = 1e-3;

/// Samples drawn before the stopping rule is first consulted, so a couple
/// of early near-identical draws cannot end an estimate prematurely.
const STOPPING_WARMUP: u64 = 16;

/// How an estimate should be produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimationMode {
    /// Integrate finite-support distributions exactly; Monte Carlo only
    /// for continuous ones.
    ExactPreferred,
    /// Monte Carlo for everything, exact path disabled (used to exercise
    /// the sampler against exact results).
    ForceMonteCarlo,
}

/// Configuration of the estimation engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimationConfig {
    pub mode: EstimationMode,
    /// Cap on Monte Carlo draws per conditional estimate; at least 1.
    pub max_samples: u64,
    /// Relative standard-error target, strictly positive.
    pub target_stderr: f64,
    /// Root seed; per-use streams are split from it, never shared.
    pub seed: u64,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        Self {
            mode: EstimationMode::ExactPreferred,
            max_samples: DEFAULT_MAX_SAMPLES,
            target_stderr: DEFAULT_TARGET_STDERR,
            seed: 0,
        }
    }
}

impl EstimationConfig {
    /// Engine configuration carried by a scenario file: its seed and
    /// sample cap, with default mode and precision target.
    pub fn for_scenario(s: &crate::alternatives::Scenario) -> Self {
        Self {
            max_samples: s.samples_per_alternative,
            seed: s.seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.max_samples == 0 {
            return Err(Error::Param {
                context: "estimation config",
                message: format!("maxSamples must be at least 1, got {}", self.max_samples),
            });
        }
        if !self.target_stderr.is_finite() || self.target_stderr <= 0.0 {
            return Err(Error::Param {
                context: "estimation config",
                message: format!(
                    "targetStderr must be finite and positive, got {}",
                    self.target_stderr
                ),
            });
        }
        Ok(())
    }

    /// The standard error an estimate of `value` must reach:
    /// `max(target_stderr * |value|, ABSOLUTE_STDERR_FLOOR)`.
    pub fn stderr_threshold(&self, value: f64) -> f64 {
        let relative = self.target_stderr * math::abs(value);
        if relative > ABSOLUTE_STDERR_FLOOR {
            relative
        } else {
            ABSOLUTE_STDERR_FLOOR
        }
    }
}

/// Result of one conditional-expectation estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    /// Estimated (or exactly computed) expectation.
    pub value: f64,
    /// Standard error of the estimate; exactly 0 on the exact path.
    pub stderr: f64,
    /// Monte Carlo draws consumed; 0 on the exact path.
    pub samples_used: u64,
    /// True when the value is an exact weighted sum, not a sample mean.
    pub exact: bool,
}

impl Estimate {
    /// Whether this estimate met the configured stopping rule. Exact
    /// estimates always do; a Monte Carlo estimate that ran into the
    /// sample cap with its standard error still above
    /// [`stderr_threshold`](EstimationConfig::stderr_threshold) did not,
    /// which callers may treat as a warning or an error as they see fit.
    pub fn meets_target(&self, cfg: &EstimationConfig) -> bool {
        self.exact || self.stderr <= cfg.stderr_threshold(self.value)
    }
}

/// Estimates `E[w(cost)]` for a cost distribution, deriving a fresh
/// anonymous stream from `cfg.seed`.
///
/// Callers estimating several related quantities under one seed (such as
/// the evaluation layer, which handles one stream per alternative and
/// conditional) should use [`estimate_conditional_in`] with streams split
/// by distinct labels instead.
pub fn estimate_conditional(
    dist: &CostDistribution,
    w: &WelfareFunction,
    cfg: &EstimationConfig,
) -> Result<Estimate, Error> {
    let mut stream = split_stream(cfg.seed, "", PURPOSE_COST_GOOD);
    estimate_conditional_in(dist, w, cfg, &mut stream)
}

/// [`estimate_conditional`] drawing from a caller-provided stream.
pub fn estimate_conditional_in(
    dist: &CostDistribution,
    w: &WelfareFunction,
    cfg: &EstimationConfig,
    stream: &mut RandomStream,
) -> Result<Estimate, Error> {
    cfg.validate()?;
    if cfg.mode == EstimationMode::ExactPreferred && dist.has_finite_support() {
        return Ok(Estimate {
            value: exact_expectation(dist, w)?,
            stderr: 0.0,
            samples_used: 0,
            exact: true,
        });
    }
    monte_carlo(dist, w, cfg, stream)
}

/// Exact weighted sum over a finite support.
fn exact_expectation(dist: &CostDistribution, w: &WelfareFunction) -> Result<f64, Error> {
    match dist {
        CostDistribution::PointMass { value } => w.eval(*value),
        CostDistribution::Discrete { values, probs } => {
            let mut total = 0.0;
            for (value, prob) in values.iter().zip(probs.iter()) {
                total += prob * w.eval(*value)?;
            }
            Ok(total)
        }
        other => Err(Error::UnsupportedDistribution {
            op: "exact expectation",
            kind: other.kind_name(),
        }),
    }
}

/// Sample mean of `w` over i.i.d. draws with Welford accumulation and the
/// relative-stderr stopping rule.
fn monte_carlo(
    dist: &CostDistribution,
    w: &WelfareFunction,
    cfg: &EstimationConfig,
    stream: &mut RandomStream,
) -> Result<Estimate, Error> {
    let warmup = STOPPING_WARMUP.min(cfg.max_samples).max(2);
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    let mut n = 0u64;
    let mut stderr = f64::INFINITY;

    while n < cfg.max_samples {
        let cost = dist.sample(stream);
        let y = w.eval(cost)?;
        n += 1;
        let delta = y - mean;
        mean += delta / n as f64;
        m2 += delta * (y - mean);

        if n >= warmup {
            // Welford's m2 is nonnegative up to rounding; clamp before sqrt.
            stderr = math::sqrt(m2.max(0.0) / (n - 1) as f64 / n as f64);
            if stderr <= cfg.stderr_threshold(mean) {
                break;
            }
        }
    }

    if n >= 2 {
        stderr = math::sqrt(m2.max(0.0) / (n - 1) as f64 / n as f64);
    }
    Ok(Estimate {
        value: mean,
        stderr,
        samples_used: n,
        exact: false,
    })
}

/// Test oracle: `E[w(C)]` by exhaustive enumeration of the outcome space
/// `{good, fail} × support`, computed here from first principles rather
/// than through the evaluation module's decomposition.
pub fn brute_force_expected_social_cost(
    a: &Alternative,
    w: &WelfareFunction,
) -> Result<f64, Error> {
    let mut total = 0.0f64;
    for (branch_prob, dist) in [(1.0 - a.p_cat, &a.cost_good), (a.p_cat, &a.cost_fail)] {
        match dist {
            CostDistribution::PointMass { value } => {
                total += branch_prob * w.eval(*value)?;
            }
            CostDistribution::Discrete { values, probs } => {
                for (value, prob) in values.iter().zip(probs.iter()) {
                    total += branch_prob * prob * w.eval(*value)?;
                }
            }
            other => {
                return Err(Error::UnsupportedDistribution {
                    op: "brute_force_expected_social_cost",
                    kind: other.kind_name(),
                })
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alternatives::AlternativeId;
    use alloc::vec;

    fn linear() -> WelfareFunction {
        WelfareFunction::linear()
    }

    #[test]
    fn finite_support_is_summed_exactly() {
        let d = CostDistribution::Discrete {
            values: vec![10.0, 20.0],
            probs: vec![0.5, 0.5],
        };
        let est = estimate_conditional(&d, &linear(), &EstimationConfig::default()).unwrap();
        assert_eq!(est.value, 15.0);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(est.samples_used, 0);
        assert!(est.exact);
        assert!(est.meets_target(&EstimationConfig::default()));
    }

    #[test]
    fn lognormal_mean_matches_closed_form() {
        let d = CostDistribution::LogNormal { mu: 0.0, sigma: 1.0 };
        let cfg = EstimationConfig {
            seed: 123,
            ..Default::default()
        };
        let est = estimate_conditional(&d, &linear(), &cfg).unwrap();
        let oracle = 0.5f64.exp();
        assert!(!est.exact);
        assert!(est.samples_used > 0);
        assert!(
            (est.value - oracle).abs() <= 3.0 * est.stderr,
            "estimate {} vs exp(0.5) = {oracle}, stderr {}",
            est.value,
            est.stderr
        );
    }

    #[test]
    fn uniform_under_power_welfare_matches_analytic_integral() {
        // ∫₀¹⁰ c² / 10 dc = 100/3.
        let d = CostDistribution::Uniform { lo: 0.0, hi: 10.0 };
        let w = WelfareFunction::power(2.0).unwrap();
        let cfg = EstimationConfig {
            seed: 7,
            ..Default::default()
        };
        let est = estimate_conditional(&d, &w, &cfg).unwrap();
        let oracle = 100.0 / 3.0;
        assert!(
            (est.value - oracle).abs() <= 3.0 * est.stderr,
            "estimate {} vs {oracle}, stderr {}",
            est.value,
            est.stderr
        );
    }

    #[test]
    fn forced_monte_carlo_agrees_with_exact_sum() {
        let d = CostDistribution::Discrete {
            values: vec![10.0, 20.0],
            probs: vec![0.5, 0.5],
        };
        let cfg = EstimationConfig {
            mode: EstimationMode::ForceMonteCarlo,
            seed: 99,
            ..Default::default()
        };
        let est = estimate_conditional(&d, &linear(), &cfg).unwrap();
        assert!(!est.exact);
        assert!((est.value - 15.0).abs() <= 4.0 * est.stderr);
    }

    #[test]
    fn forced_monte_carlo_on_point_mass_converges_immediately() {
        let d = CostDistribution::PointMass { value: 42.0 };
        let cfg = EstimationConfig {
            mode: EstimationMode::ForceMonteCarlo,
            seed: 1,
            ..Default::default()
        };
        let est = estimate_conditional(&d, &linear(), &cfg).unwrap();
        assert_eq!(est.value, 42.0);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(est.samples_used, 16, "stops right after warmup");
        assert!(est.meets_target(&cfg));
    }

    #[test]
    fn sample_cap_is_honored_and_reported() {
        let d = CostDistribution::LogNormal { mu: 0.0, sigma: 2.0 };
        let cfg = EstimationConfig {
            max_samples: 500,
            target_stderr: 1e-9,
            seed: 5,
            ..Default::default()
        };
        let est = estimate_conditional(&d, &linear(), &cfg).unwrap();
        assert_eq!(est.samples_used, 500);
        assert!(!est.meets_target(&cfg), "cap reached above target");
    }

    #[test]
    fn stopping_threshold_has_absolute_floor() {
        let cfg = EstimationConfig::default();
        assert_eq!(cfg.stderr_threshold(10.0), 1e-2);
        assert_eq!(cfg.stderr_threshold(0.0), ABSOLUTE_STDERR_FLOOR);
        assert_eq!(cfg.stderr_threshold(-10.0), 1e-2);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mut cfg = EstimationConfig {
            max_samples: 0,
            ..Default::default()
        };
        let d = CostDistribution::PointMass { value: 1.0 };
        assert!(matches!(
            estimate_conditional(&d, &linear(), &cfg),
            Err(Error::Param { .. })
        ));
        cfg = EstimationConfig {
            target_stderr: 0.0,
            ..Default::default()
        };
        assert!(estimate_conditional(&d, &linear(), &cfg).is_err());
    }

    #[test]
    fn domain_violations_propagate() {
        // Power welfare over a support that dips below zero.
        let d = CostDistribution::PointMass { value: -1.0 };
        let w = WelfareFunction::power(2.0).unwrap();
        assert!(matches!(
            estimate_conditional(&d, &w, &EstimationConfig::default()),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn estimates_are_bit_reproducible() {
        let d = CostDistribution::Triangular {
            lo: 1.0,
            mode: 4.0,
            hi: 9.0,
        };
        let cfg = EstimationConfig {
            seed: 2024,
            ..Default::default()
        };
        let a = estimate_conditional(&d, &linear(), &cfg).unwrap();
        let b = estimate_conditional(&d, &linear(), &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        assert_eq!(a.samples_used, b.samples_used);
    }

    #[test]
    fn brute_force_matches_hand_arithmetic() {
        let a = Alternative {
            id: AlternativeId::new("a"),
            p_cat: 0.1,
            cost_good: CostDistribution::PointMass { value: 10.0 },
            cost_fail: CostDistribution::PointMass { value: 100.0 },
        };
        assert_eq!(brute_force_expected_social_cost(&a, &linear()).unwrap(), 19.0);
    }

    #[test]
    fn brute_force_degenerates_to_conditional_at_p_one() {
        let a = Alternative {
            id: AlternativeId::new("a"),
            p_cat: 1.0,
            cost_good: CostDistribution::PointMass { value: 10.0 },
            cost_fail: CostDistribution::Discrete {
                values: vec![50.0, 150.0],
                probs: vec![0.5, 0.5],
            },
        };
        assert_eq!(
            brute_force_expected_social_cost(&a, &linear()).unwrap(),
            100.0
        );
    }

    #[test]
    fn brute_force_rejects_continuous_laws() {
        let a = Alternative {
            id: AlternativeId::new("a"),
            p_cat: 0.5,
            cost_good: CostDistribution::Uniform { lo: 0.0, hi: 1.0 },
            cost_fail: CostDistribution::PointMass { value: 10.0 },
        };
        assert!(matches!(
            brute_force_expected_social_cost(&a, &linear()),
            Err(Error::UnsupportedDistribution { kind: "Uniform", .. })
        ));
    }

    #[test]
    fn distinct_labels_give_uncorrelated_uniforms() {
        let mut a = split_stream(77, "label-one", 0);
        let mut b = split_stream(77, "label-two", 0);
        let n = 10_000;
        let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let x = a.next_f64();
            let y = b.next_f64();
            sa += x;
            sb += y;
            saa += x * x;
            sbb += y * y;
            sab += x * y;
        }
        let n = n as f64;
        let cov = sab / n - (sa / n) * (sb / n);
        let var_a = saa / n - (sa / n) * (sa / n);
        let var_b = sbb / n - (sb / n) * (sb / n);
        let corr = cov / (var_a * var_b).sqrt();
        assert!(corr.abs() < 0.05, "correlation {corr}");
    }

    #[test]
    fn stream_derivation_ignores_creation_order() {
        let first_then_second = {
            let mut s1 = split_stream(5, "x", 0);
            let _ = split_stream(5, "y", 0);
            s1.next_u64()
        };
        let second_then_first = {
            let _ = split_stream(5, "y", 0);
            let mut s1 = split_stream(5, "x", 0);
            s1.next_u64()
        };
        let direct = split_stream(5, "x", 0).next_u64();
        assert_eq!(first_then_second, second_then_first);
        assert_eq!(first_then_second, direct);
    }
}
