//! The decision calculus: expected social cost, premiums, optimal
//! selection, point-slope bounds, portfolio classification, and the Hand
//! Rule.
//!
//! For one alternative with catastrophe probability `p`, good-lifecycle
//! conditional expected social cost `c_g` and catastrophe conditional
//! `c_f`, the expected lifecycle social cost decomposes as
//!
//! ```text
//! E[w(C)] = c_g + (c_f - c_g) * p = c_g + c_p * p
//! ```
//!
//! with `c_p = c_f - c_g` the catastrophe premium. Selecting the
//! alternative minimising this quantity induces a family of pairwise
//! inequalities; rearranged into point-slope form against any rival, they
//! say the optimal point `(p*, ·)` must lie on or below a line whose slope
//! is the rival-to-optimal premium ratio. [`point_slope_bound`] checks
//! exactly that, and a violated check certifies a selection bug rather
//! than an interesting fact about the portfolio.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::alternatives::{Alternative, AlternativeId, Scenario};
use crate::error::Error;
use crate::math;
use crate::montecarlo::{
    estimate_conditional_in, EstimationConfig, PURPOSE_COST_FAIL, PURPOSE_COST_GOOD,
};
use crate::rng::split_stream;
use crate::welfare::WelfareFunction;

/// Tolerance for the bound-satisfaction comparison; analytic identities in
/// the exact path are held to 1e-12 by the test suite, while this guards
/// against legitimate accumulated floating error in the inequality check.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Everything the calculus knows about one alternative after estimation.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub id: AlternativeId,
    /// Expected social cost of a good (catastrophe-free) lifecycle.
    pub c_good: f64,
    /// Expected social cost of a lifecycle ending in catastrophe.
    pub c_fail: f64,
    /// Catastrophe premium `c_fail - c_good`.
    pub c_premium: f64,
    /// Probability of catastrophe.
    pub p_cat: f64,
    /// `c_good + c_premium * p_cat`, the quantity selection minimises.
    pub expected_social_cost: f64,
    /// Standard error propagated from the conditional estimates; exactly 0
    /// when both conditionals took the exact path.
    pub stderr: f64,
}

/// Classification of an alternative relative to the selected optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    /// The unique argmin of expected social cost.
    SociallyOptimal,
    /// Not optimal, but with a strictly lower catastrophe probability than
    /// the optimum — safer than society is willing to pay for.
    SuperOptimal,
    /// Everything else.
    SubOptimal,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::SociallyOptimal => "SociallyOptimal",
            Label::SuperOptimal => "SuperOptimal",
            Label::SubOptimal => "SubOptimal",
        })
    }
}

/// Result of testing one rival against the optimal alternative's
/// point-slope bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub optimal_id: AlternativeId,
    pub rival_id: AlternativeId,
    /// `rival.c_premium / optimal.c_premium`; NaN when degenerate.
    pub slope: f64,
    /// `-(optimal.c_good - rival.c_good) / optimal.c_premium`; NaN when
    /// degenerate.
    pub intercept: f64,
    /// Whether `optimal.p_cat <= slope * rival.p_cat + intercept` within
    /// [`BOUND_TOLERANCE`]; always false when degenerate.
    pub satisfied: bool,
    /// True when the optimal premium is not strictly positive, leaving the
    /// bound line undefined (division guard).
    pub degenerate: bool,
}

/// Full classification of a portfolio around its selected optimum.
#[derive(Clone, Debug, PartialEq)]
pub struct PortfolioAnalysis {
    pub optimal_id: AlternativeId,
    /// Evaluations in input order.
    pub evaluations: Vec<Evaluation>,
    /// Label per alternative; exactly one is `SociallyOptimal`.
    pub labels: BTreeMap<AlternativeId, Label>,
    /// Margin of safety `p_optimal - p` per alternative (0 for the
    /// optimum itself); strictly positive exactly for `SuperOptimal`.
    pub margins: BTreeMap<AlternativeId, f64>,
    /// Reliability premium `c_good_optimal - c_good_rival` per rival; may
    /// be negative.
    pub reliability_premiums: BTreeMap<AlternativeId, f64>,
    /// Point-slope bound checks for every rival, in input order.
    pub bound_checks: Vec<BoundCheck>,
}

impl PortfolioAnalysis {
    /// Builds the full classification from finished evaluations.
    ///
    /// Fails with [`Error::EmptyPortfolio`] on an empty list and
    /// [`Error::Param`] on duplicate ids.
    pub fn from_evaluations(evaluations: Vec<Evaluation>) -> Result<Self, Error> {
        for (index, eval) in evaluations.iter().enumerate() {
            if evaluations[..index].iter().any(|prev| prev.id == eval.id) {
                return Err(Error::Param {
                    context: "portfolio",
                    message: format!("duplicate alternative id `{}`", eval.id),
                });
            }
        }
        let optimal_id = select_optimal(&evaluations)?;
        let optimal = evaluations
            .iter()
            .find(|e| e.id == optimal_id)
            .expect("optimal id comes from the evaluations")
            .clone();

        let mut labels = BTreeMap::new();
        let mut margins = BTreeMap::new();
        let mut reliability_premiums = BTreeMap::new();
        let mut bound_checks = Vec::new();

        for eval in &evaluations {
            let label = if eval.id == optimal_id {
                Label::SociallyOptimal
            } else if eval.p_cat < optimal.p_cat {
                Label::SuperOptimal
            } else {
                Label::SubOptimal
            };
            labels.insert(eval.id.clone(), label);
            margins.insert(eval.id.clone(), optimal.p_cat - eval.p_cat);
            if eval.id != optimal_id {
                reliability_premiums.insert(eval.id.clone(), optimal.c_good - eval.c_good);
                bound_checks.push(point_slope_bound(&optimal, eval));
            }
        }

        Ok(Self {
            optimal_id,
            evaluations,
            labels,
            margins,
            reliability_premiums,
            bound_checks,
        })
    }

    /// The evaluation of the selected optimum.
    pub fn optimal(&self) -> &Evaluation {
        self.evaluations
            .iter()
            .find(|e| e.id == self.optimal_id)
            .expect("analysis always contains its optimum")
    }
}

/// Verdict of the Hand Rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Negligent,
    NotNegligent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Negligent => "Negligent",
            Verdict::NotNegligent => "NotNegligent",
        })
    }
}

/// Inputs to the Hand Rule negligence test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegligenceCase {
    /// Burden of protection `b`; nonnegative.
    pub burden: f64,
    /// Probability of harm `P`; in `[0, 1]`.
    pub p_harm: f64,
    /// Value of the loss caused `L`; nonnegative.
    pub loss: f64,
}

impl NegligenceCase {
    pub fn new(burden: f64, p_harm: f64, loss: f64) -> Result<Self, Error> {
        let case = Self {
            burden,
            p_harm,
            loss,
        };
        case.validate()?;
        Ok(case)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let param = |message| Error::Param {
            context: "negligence case",
            message,
        };
        if !self.burden.is_finite() || self.burden < 0.0 {
            return Err(param(format!(
                "burden must be finite and nonnegative, got {}",
                self.burden
            )));
        }
        if !self.p_harm.is_finite() || !(0.0..=1.0).contains(&self.p_harm) {
            return Err(param(format!(
                "pHarm must lie in [0, 1], got {}",
                self.p_harm
            )));
        }
        if !self.loss.is_finite() || self.loss < 0.0 {
            return Err(param(format!(
                "loss must be finite and nonnegative, got {}",
                self.loss
            )));
        }
        Ok(())
    }
}

/// Evaluates one alternative: both conditional expectations through the
/// estimation engine, then the decomposition `c_good + c_premium * p_cat`.
///
/// Each conditional draws from its own stream split from
/// `(cfg.seed, id, purpose)`, so results are independent of evaluation
/// order and worker count. The reported standard error combines the
/// conditional errors with the decomposition's weights:
/// `sqrt(((1-p) * se_good)^2 + (p * se_fail)^2)`.
///
/// A Monte Carlo conditional that exhausts its sample cap above the
/// stopping threshold makes the whole evaluation fail with
/// [`Error::Estimation`].
pub fn evaluate_alternative(
    a: &Alternative,
    w: &WelfareFunction,
    cfg: &EstimationConfig,
) -> Result<Evaluation, Error> {
    let mut good_stream = split_stream(cfg.seed, a.id.as_str(), PURPOSE_COST_GOOD);
    let mut fail_stream = split_stream(cfg.seed, a.id.as_str(), PURPOSE_COST_FAIL);
    let good = estimate_conditional_in(&a.cost_good, w, cfg, &mut good_stream)?;
    let fail = estimate_conditional_in(&a.cost_fail, w, cfg, &mut fail_stream)?;
    for estimate in [&good, &fail] {
        if !estimate.meets_target(cfg) {
            return Err(Error::Estimation {
                id: a.id.clone(),
                stderr: estimate.stderr,
                target: cfg.stderr_threshold(estimate.value),
                samples: estimate.samples_used,
            });
        }
    }

    let c_good = good.value;
    let c_fail = fail.value;
    let c_premium = c_fail - c_good;
    let good_term = (1.0 - a.p_cat) * good.stderr;
    let fail_term = a.p_cat * fail.stderr;
    Ok(Evaluation {
        id: a.id.clone(),
        c_good,
        c_fail,
        c_premium,
        p_cat: a.p_cat,
        expected_social_cost: c_good + c_premium * a.p_cat,
        stderr: math::sqrt(good_term * good_term + fail_term * fail_term),
    })
}

/// Selects the id with minimal expected social cost.
///
/// Ties break toward the lower catastrophe probability, then the
/// lexicographically smaller id, so the result is deterministic and unique
/// for any input order.
pub fn select_optimal(evals: &[Evaluation]) -> Result<AlternativeId, Error> {
    evals
        .iter()
        .min_by(|a, b| {
            a.expected_social_cost
                .total_cmp(&b.expected_social_cost)
                .then(a.p_cat.total_cmp(&b.p_cat))
                .then_with(|| a.id.cmp(&b.id))
        })
        .map(|e| e.id.clone())
        .ok_or(Error::EmptyPortfolio)
}

/// Reliability premium of preferring the optimum over a rival:
/// `optimal.c_good - rival.c_good`. Negative when the optimum is the
/// cheaper one to run clean.
pub fn reliability_premium(optimal: &Evaluation, rival: &Evaluation) -> Result<f64, Error> {
    if optimal.id == rival.id {
        return Err(Error::SameAlternative {
            id: optimal.id.clone(),
        });
    }
    Ok(optimal.c_good - rival.c_good)
}

/// Margin of safety of a rival relative to the optimum:
/// `optimal.p_cat - rival.p_cat`, positive exactly when the rival is the
/// safer technology.
pub fn margin_of_safety(optimal: &Evaluation, rival: &Evaluation) -> Result<f64, Error> {
    if optimal.id == rival.id {
        return Err(Error::SameAlternative {
            id: optimal.id.clone(),
        });
    }
    Ok(optimal.p_cat - rival.p_cat)
}

/// Builds the point-slope bound of the optimum against one rival and tests
/// it.
///
/// With a nonpositive optimal premium the line is undefined; the check
/// comes back `degenerate` with NaN coefficients instead of erroring, so
/// pathological portfolios can still be reported in full.
pub fn point_slope_bound(optimal: &Evaluation, rival: &Evaluation) -> BoundCheck {
    // The comparison is written positively so a NaN premium lands in the
    // degenerate branch too.
    if optimal.c_premium > 0.0 {
        let slope = rival.c_premium / optimal.c_premium;
        let intercept = -(optimal.c_good - rival.c_good) / optimal.c_premium;
        BoundCheck {
            optimal_id: optimal.id.clone(),
            rival_id: rival.id.clone(),
            slope,
            intercept,
            satisfied: optimal.p_cat <= slope * rival.p_cat + intercept + BOUND_TOLERANCE,
            degenerate: false,
        }
    } else {
        BoundCheck {
            optimal_id: optimal.id.clone(),
            rival_id: rival.id.clone(),
            slope: f64::NAN,
            intercept: f64::NAN,
            satisfied: false,
            degenerate: true,
        }
    }
}

/// Evaluates every alternative in the scenario and classifies the
/// portfolio around the selected optimum.
pub fn classify_portfolio(
    s: &Scenario,
    cfg: &EstimationConfig,
) -> Result<PortfolioAnalysis, Error> {
    let evaluations = s
        .alternatives
        .iter()
        .map(|a| evaluate_alternative(a, &s.welfare, cfg))
        .collect::<Result<Vec<_>, Error>>()?;
    PortfolioAnalysis::from_evaluations(evaluations)
}

/// The Hand Rule: negligent exactly when the burden of protection is
/// strictly below expected harm, `b < P * L`. Equality is not negligence.
pub fn hand_rule(case: &NegligenceCase) -> Result<Verdict, Error> {
    case.validate()?;
    if case.burden < case.p_harm * case.loss {
        Ok(Verdict::Negligent)
    } else {
        Ok(Verdict::NotNegligent)
    }
}
