//! Error type shared by the whole calculus.

use alloc::string::String;

use crate::alternatives::AlternativeId;

/// Everything that can go wrong while building or evaluating a scenario.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A constructor or configuration invariant was violated.
    #[error("invalid {context}: {message}")]
    Param {
        /// What was being constructed or configured.
        context: &'static str,
        message: String,
    },

    /// A cost fell outside the welfare function's domain.
    #[error("welfare domain violation: {message}")]
    Domain { message: String },

    /// A Monte Carlo estimate missed its precision target at the sample cap.
    #[error(
        "estimate for `{id}` did not converge: stderr {stderr:e} above target {target:e} \
         after {samples} samples"
    )]
    Estimation {
        id: AlternativeId,
        stderr: f64,
        target: f64,
        samples: u64,
    },

    /// A portfolio operation was given no alternatives to work with.
    #[error("portfolio contains no alternatives")]
    EmptyPortfolio,

    /// A pairwise comparison was asked to compare an alternative with itself.
    #[error("`{id}` cannot be compared with itself")]
    SameAlternative { id: AlternativeId },

    /// An exact-enumeration operation was given a distribution without
    /// finite support.
    #[error("{op} requires finite support, got a {kind} distribution")]
    UnsupportedDistribution {
        /// The operation that needed finite support.
        op: &'static str,
        /// Kind name of the offending distribution.
        kind: &'static str,
    },
}
