//! Decision calculus for selecting among protective-system alternatives.
//!
//! A regulator (or any social planner) choosing between candidate
//! technologies faces a trade-off: safer systems usually cost more when
//! nothing goes wrong, while cheaper systems carry a larger probability of a
//! catastrophic lifecycle. This crate models that choice as the minimisation
//! of expected lifecycle *social* cost,
//!
//! ```text
//! E[w(C)] = c_g + (c_f - c_g) * p
//! ```
//!
//! where `w` is an increasing welfare function mapping monetary lifecycle
//! cost to social cost, `c_g` and `c_f` are the conditional expected social
//! costs of the good (no catastrophe) and failed lifecycles, and `p` is the
//! catastrophe probability. The gap `c_p = c_f - c_g` is the *catastrophe
//! premium* of an alternative.
//!
//! On top of plain selection the crate quantifies how much safety margin
//! the optimal alternative has over its rivals:
//!
//! * **Margin of safety** — the catastrophe-probability headroom
//!   `p_opt - p_rival` between the optimal alternative and a rival.
//! * **Reliability premium** — the extra good-lifecycle social cost
//!   `c_g_opt - c_g_rival` the planner accepts (or banks, when negative)
//!   by preferring the optimal alternative.
//! * **Point-slope bound** — the straight line through the optimal
//!   alternative's position that every rival's economics must keep the
//!   optimal point below; a violated bound certifies a selection bug.
//! * **Hand Rule** — the classic negligence test `b < P * L` for a burden
//!   of precaution `b`, harm probability `P`, and loss `L`.
//!
//! ```
//! use margins::{
//!     classify_portfolio, Alternative, CostDistribution, EstimationConfig, Label, Scenario,
//!     WelfareFunction,
//! };
//!
//! let scenario = Scenario {
//!     alternatives: vec![
//!         Alternative {
//!             id: "reinforced".into(),
//!             p_cat: 0.01,
//!             cost_good: CostDistribution::PointMass { value: 30.0 },
//!             cost_fail: CostDistribution::PointMass { value: 120.0 },
//!         },
//!         Alternative {
//!             id: "budget".into(),
//!             p_cat: 0.2,
//!             cost_good: CostDistribution::PointMass { value: 10.0 },
//!             cost_fail: CostDistribution::PointMass { value: 120.0 },
//!         },
//!     ],
//!     welfare: WelfareFunction::linear(),
//!     seed: 1,
//!     samples_per_alternative: 10_000,
//! };
//!
//! let analysis = classify_portfolio(&scenario, &EstimationConfig::for_scenario(&scenario))?;
//! // 30 + 90 * 0.01 = 30.9 beats 10 + 110 * 0.2 = 32.
//! assert_eq!(analysis.optimal_id.as_str(), "reinforced");
//! assert_eq!(analysis.labels[&"budget".into()], Label::SubOptimal);
//! # Ok::<(), margins::Error>(())
//! ```
//!
//! Conditional cost distributions with finite support are integrated
//! exactly; continuous ones are estimated by Monte Carlo with a
//! deterministic, platform-independent random stream per alternative, so a
//! given scenario and seed always reproduce the same analysis bit for bit.
//!
//! The crate is `no_std` (with `alloc`) so the calculus can be embedded in
//! constrained or certified environments; file formats and the command-line
//! front end live in the companion `margins-cli` crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod alternatives;
pub mod error;
pub mod evaluation;
mod math;
pub mod montecarlo;
pub mod rng;
pub mod welfare;

pub use alternatives::{
    sample_lifecycle, validate_scenario, Alternative, AlternativeId, CostDistribution, Scenario,
    Violation,
};
pub use error::Error;
pub use evaluation::{
    classify_portfolio, evaluate_alternative, hand_rule, margin_of_safety, point_slope_bound,
    reliability_premium, select_optimal, BoundCheck, Evaluation, Label, NegligenceCase,
    PortfolioAnalysis, Verdict, BOUND_TOLERANCE,
};
pub use montecarlo::{
    brute_force_expected_social_cost, estimate_conditional, estimate_conditional_in, Estimate,
    EstimationConfig, EstimationMode,
};
pub use rng::{split_stream, RandomStream, SplitMix64};
pub use welfare::{WelfareFamily, WelfareFunction};
