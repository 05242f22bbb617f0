//! Regulator-induced social welfare functions.
//!
//! A welfare function `w` translates monetary lifecycle cost into social
//! cost. It must be strictly increasing — more cost is never socially
//! better — and it is meaningful only up to positive affine transformation:
//! replacing `w` by `a*w + b` with `a > 0` changes every evaluation number
//! but never the ranking of alternatives, so the selected optimum is
//! invariant. [`WelfareFunction::affine_transform`] exists precisely to
//! exercise and exploit that freedom.

use alloc::format;

use crate::error::Error;
use crate::math;

/// Functional family of a [`WelfareFunction`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WelfareFamily {
    /// Risk-neutral: social cost is monetary cost.
    Linear,
    /// Constant absolute risk aversion, `(exp(a*c) - 1) / a` with `a > 0`.
    ///
    /// Implemented as `expm1(a*c) / a`, which stays accurate for small `a`
    /// and deforms continuously into [`Linear`](WelfareFamily::Linear) as
    /// `a` approaches zero.
    Exponential {
        /// Absolute risk-aversion coefficient, strictly positive.
        risk_aversion: f64,
    },
    /// Polynomial aversion on nonnegative costs, `c^gamma` with `gamma >= 1`.
    ///
    /// Only defined for `c >= 0`; evaluating a negative cost is a domain
    /// error.
    Power {
        /// Exponent, at least 1 so the function stays convex and increasing.
        exponent: f64,
    },
}

impl WelfareFamily {
    /// Short lowercase name, used in messages and file formats.
    pub fn name(&self) -> &'static str {
        match self {
            WelfareFamily::Linear => "linear",
            WelfareFamily::Exponential { .. } => "exponential",
            WelfareFamily::Power { .. } => "power",
        }
    }
}

/// A strictly increasing map from lifecycle cost to social cost, stored as
/// a base family plus an affine layer: `w(c) = scale * base(c) + shift`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WelfareFunction {
    pub family: WelfareFamily,
    /// Affine scale; must be finite and strictly positive.
    pub scale: f64,
    /// Affine shift; must be finite.
    pub shift: f64,
}

impl WelfareFunction {
    /// The identity welfare function: social cost equals monetary cost.
    pub fn linear() -> Self {
        Self {
            family: WelfareFamily::Linear,
            scale: 1.0,
            shift: 0.0,
        }
    }

    /// Exponential (constant absolute risk aversion) welfare with
    /// coefficient `risk_aversion > 0`.
    pub fn exponential(risk_aversion: f64) -> Result<Self, Error> {
        Self::new(WelfareFamily::Exponential { risk_aversion }, 1.0, 0.0)
    }

    /// Power welfare `c^exponent` with `exponent >= 1`.
    pub fn power(exponent: f64) -> Result<Self, Error> {
        Self::new(WelfareFamily::Power { exponent }, 1.0, 0.0)
    }

    /// Builds a welfare function and checks every invariant.
    pub fn new(family: WelfareFamily, scale: f64, shift: f64) -> Result<Self, Error> {
        let w = Self {
            family,
            scale,
            shift,
        };
        w.validate()?;
        Ok(w)
    }

    /// Checks the family parameter and affine-layer invariants.
    pub fn validate(&self) -> Result<(), Error> {
        let param = |message| Error::Param {
            context: "welfare function",
            message,
        };
        match self.family {
            WelfareFamily::Linear => {}
            WelfareFamily::Exponential { risk_aversion } => {
                if !risk_aversion.is_finite() || risk_aversion <= 0.0 {
                    return Err(param(format!(
                        "risk aversion must be finite and positive, got {risk_aversion}"
                    )));
                }
            }
            WelfareFamily::Power { exponent } => {
                if !exponent.is_finite() || exponent < 1.0 {
                    return Err(param(format!(
                        "power exponent must be finite and at least 1, got {exponent}"
                    )));
                }
            }
        }
        if !self.scale.is_finite() || self.scale <= 0.0 {
            return Err(param(format!(
                "affine scale must be finite and positive, got {}",
                self.scale
            )));
        }
        if !self.shift.is_finite() {
            return Err(param(format!(
                "affine shift must be finite, got {}",
                self.shift
            )));
        }
        Ok(())
    }

    /// Social cost of a monetary lifecycle cost.
    ///
    /// Errors with [`Error::Domain`] if `cost` is not finite, or is
    /// negative under a [`Power`](WelfareFamily::Power) family.
    pub fn eval(&self, cost: f64) -> Result<f64, Error> {
        if !cost.is_finite() {
            return Err(Error::Domain {
                message: format!("cost must be finite, got {cost}"),
            });
        }
        let base = match self.family {
            WelfareFamily::Linear => cost,
            WelfareFamily::Exponential { risk_aversion } => {
                math::expm1(risk_aversion * cost) / risk_aversion
            }
            WelfareFamily::Power { exponent } => {
                if cost < 0.0 {
                    return Err(Error::Domain {
                        message: format!(
                            "power welfare is only defined for nonnegative costs, got {cost}"
                        ),
                    });
                }
                math::pow(cost, exponent)
            }
        };
        Ok(self.scale * base + self.shift)
    }

    /// Returns `scale * w + shift` as a new welfare function.
    ///
    /// Requires `scale > 0` (and both arguments finite) so the result is
    /// still strictly increasing. Selection by expected social cost is
    /// invariant under this operation.
    pub fn affine_transform(&self, scale: f64, shift: f64) -> Result<Self, Error> {
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::Param {
                context: "affine transform",
                message: format!("scale must be finite and positive, got {scale}"),
            });
        }
        if !shift.is_finite() {
            return Err(Error::Param {
                context: "affine transform",
                message: format!("shift must be finite, got {shift}"),
            });
        }
        Ok(Self {
            family: self.family,
            scale: scale * self.scale,
            shift: scale * self.shift + shift,
        })
    }
}
