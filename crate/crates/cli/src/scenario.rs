//! Scenario file format: parsing, validation, and canonical serialization.
//!
//! Scenarios are JSON documents with this shape (see
//! `docs/scenario_format.md` for the full schema):
//!
//! ```json
//! {
//!   "formatVersion": "1",
//!   "metadata": { "title": "..." },
//!   "welfare": { "family": "linear", "affineScale": 1.0, "affineShift": 0.0 },
//!   "seed": 42,
//!   "samplesPerAlternative": 100000,
//!   "alternatives": [
//!     {
//!       "id": "a1",
//!       "pCat": 0.1,
//!       "costGood": { "kind": "PointMass", "value": 10.0 },
//!       "costFail": { "kind": "PointMass", "value": 100.0 }
//!     }
//!   ]
//! }
//! ```
//!
//! Parsing is total — any byte sequence yields either a document or a
//! typed [`ScenarioError`], never a panic — and strict: unknown fields,
//! missing fields, and parameters that do not belong to the declared
//! distribution kind are schema errors, because safety-analysis inputs
//! must not silently drop data.
//!
//! [`serialize_scenario`] is canonical: keys are emitted in the schema's
//! documented order, alternatives are sorted by id, metadata keys
//! alphabetically, and numbers in shortest round-trip decimal. Two
//! documents that compare equal serialize to identical bytes, and
//! `serialize(parse(serialize(d))) == serialize(d)`.

use std::collections::BTreeMap;
use std::fmt;

use margins::{
    validate_scenario, Alternative, CostDistribution, Scenario, Violation, WelfareFamily,
    WelfareFunction,
};
use serde::{Deserialize, Serialize};

/// Format version this build reads and writes.
pub const FORMAT_VERSION: &str = "1";

/// A parsed scenario file: the scenario plus its envelope.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioDocument {
    /// Always [`FORMAT_VERSION`] after a successful parse.
    pub format_version: String,
    /// Free-form descriptive map (title, description, ...).
    pub metadata: BTreeMap<String, String>,
    pub scenario: Scenario,
}

/// Why a scenario file failed to load.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    /// The text is not well-formed JSON.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed, but does not match the schema (unknown or missing
    /// fields, wrong types, unknown kind names, wrong version).
    #[error("schema error: {message}")]
    Schema { message: String },
    /// Matches the schema, but the scenario breaks domain invariants.
    /// Carries every violation, not just the first.
    #[error("invalid scenario: {}", format_violations(.0))]
    Validation(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    format!("{} violation(s): {}", violations.len(), lines.join("; "))
}

// ---------------------------------------------------------------------------
// Wire representation
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentDto {
    #[serde(rename = "formatVersion")]
    format_version: String,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
    welfare: WelfareDto,
    seed: u64,
    #[serde(rename = "samplesPerAlternative")]
    samples_per_alternative: u64,
    alternatives: Vec<AlternativeDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WelfareDto {
    family: String,
    #[serde(rename = "riskParam", default, skip_serializing_if = "Option::is_none")]
    risk_param: Option<f64>,
    #[serde(rename = "affineScale")]
    affine_scale: f64,
    #[serde(rename = "affineShift")]
    affine_shift: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlternativeDto {
    id: String,
    #[serde(rename = "pCat")]
    p_cat: f64,
    #[serde(rename = "costGood")]
    cost_good: DistributionDto,
    #[serde(rename = "costFail")]
    cost_fail: DistributionDto,
}

/// Distributions are encoded as a `kind` tag plus exactly the parameters
/// that kind requires. All parameters are optional at the serde level so
/// that presence can be checked per kind with precise messages.
#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct DistributionDto {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
}

/// Names every parameter field the DTO can carry, in schema order.
const ALL_PARAMS: [&str; 8] = [
    "value", "values", "probs", "lo", "mode", "hi", "mu", "sigma",
];

impl DistributionDto {
    fn present(&self) -> Vec<&'static str> {
        let flags = [
            self.value.is_some(),
            self.values.is_some(),
            self.probs.is_some(),
            self.lo.is_some(),
            self.mode.is_some(),
            self.hi.is_some(),
            self.mu.is_some(),
            self.sigma.is_some(),
        ];
        ALL_PARAMS
            .iter()
            .zip(flags)
            .filter_map(|(name, on)| on.then_some(*name))
            .collect()
    }

    fn to_core(&self, context: &str) -> Result<CostDistribution, ScenarioError> {
        let required: &[&str] = match self.kind.as_str() {
            "PointMass" => &["value"],
            "Discrete" => &["values", "probs"],
            "Uniform" => &["lo", "hi"],
            "Triangular" => &["lo", "mode", "hi"],
            "LogNormal" => &["mu", "sigma"],
            other => {
                return Err(ScenarioError::Schema {
                    message: format!(
                        "{context}: unknown distribution kind `{other}`; expected one of \
                         PointMass, Discrete, Uniform, Triangular, LogNormal"
                    ),
                })
            }
        };
        let present = self.present();
        for name in required {
            if !present.contains(name) {
                return Err(ScenarioError::Schema {
                    message: format!(
                        "{context}: kind {} requires field `{name}`",
                        self.kind
                    ),
                });
            }
        }
        if let Some(extra) = present.iter().find(|name| !required.contains(name)) {
            return Err(ScenarioError::Schema {
                message: format!(
                    "{context}: field `{extra}` is not allowed for kind {}",
                    self.kind
                ),
            });
        }

        Ok(match self.kind.as_str() {
            "PointMass" => CostDistribution::PointMass {
                value: self.value.unwrap(),
            },
            "Discrete" => CostDistribution::Discrete {
                values: self.values.clone().unwrap(),
                probs: self.probs.clone().unwrap(),
            },
            "Uniform" => CostDistribution::Uniform {
                lo: self.lo.unwrap(),
                hi: self.hi.unwrap(),
            },
            "Triangular" => CostDistribution::Triangular {
                lo: self.lo.unwrap(),
                mode: self.mode.unwrap(),
                hi: self.hi.unwrap(),
            },
            _ => CostDistribution::LogNormal {
                mu: self.mu.unwrap(),
                sigma: self.sigma.unwrap(),
            },
        })
    }

    fn from_core(dist: &CostDistribution) -> Self {
        let mut dto = DistributionDto {
            kind: dist.kind_name().to_string(),
            ..Default::default()
        };
        match dist {
            CostDistribution::PointMass { value } => dto.value = Some(*value),
            CostDistribution::Discrete { values, probs } => {
                dto.values = Some(values.clone());
                dto.probs = Some(probs.clone());
            }
            CostDistribution::Uniform { lo, hi } => {
                dto.lo = Some(*lo);
                dto.hi = Some(*hi);
            }
            CostDistribution::Triangular { lo, mode, hi } => {
                dto.lo = Some(*lo);
                dto.mode = Some(*mode);
                dto.hi = Some(*hi);
            }
            CostDistribution::LogNormal { mu, sigma } => {
                dto.mu = Some(*mu);
                dto.sigma = Some(*sigma);
            }
        }
        dto
    }
}

fn welfare_to_core(dto: &WelfareDto) -> Result<WelfareFunction, ScenarioError> {
    let family = match dto.family.as_str() {
        "linear" => {
            if dto.risk_param.is_some() {
                return Err(ScenarioError::Schema {
                    message: String::from(
                        "welfare: riskParam is not allowed for family `linear` (it is unused); \
                         omit the field",
                    ),
                });
            }
            WelfareFamily::Linear
        }
        "exponential" => WelfareFamily::Exponential {
            risk_aversion: require_risk_param(dto)?,
        },
        "power" => WelfareFamily::Power {
            exponent: require_risk_param(dto)?,
        },
        other => {
            return Err(ScenarioError::Schema {
                message: format!(
                    "welfare: unknown family `{other}`; expected one of linear, exponential, power"
                ),
            })
        }
    };
    // Parameter *values* are validated later with everything else; here the
    // welfare function is only assembled structurally.
    Ok(WelfareFunction {
        family,
        scale: dto.affine_scale,
        shift: dto.affine_shift,
    })
}

fn require_risk_param(dto: &WelfareDto) -> Result<f64, ScenarioError> {
    dto.risk_param.ok_or_else(|| ScenarioError::Schema {
        message: format!("welfare: family `{}` requires riskParam", dto.family),
    })
}

fn welfare_from_core(w: &WelfareFunction) -> WelfareDto {
    let (family, risk_param) = match w.family {
        WelfareFamily::Linear => ("linear", None),
        WelfareFamily::Exponential { risk_aversion } => ("exponential", Some(risk_aversion)),
        WelfareFamily::Power { exponent } => ("power", Some(exponent)),
    };
    WelfareDto {
        family: family.to_string(),
        risk_param,
        affine_scale: w.scale,
        affine_shift: w.shift,
    }
}

// ---------------------------------------------------------------------------
// Parse / serialize
// ---------------------------------------------------------------------------

/// Parses and fully validates a scenario file.
///
/// Never panics: malformed text is [`ScenarioError::Syntax`], schema
/// mismatches are [`ScenarioError::Schema`], and domain-invariant
/// violations come back aggregated in [`ScenarioError::Validation`].
pub fn parse_scenario(text: &[u8]) -> Result<ScenarioDocument, ScenarioError> {
    let dto: DocumentDto = serde_json::from_slice(text).map_err(|err| {
        use serde_json::error::Category;
        match err.classify() {
            Category::Syntax | Category::Eof => ScenarioError::Syntax {
                line: err.line(),
                column: err.column(),
                message: err.to_string(),
            },
            // Data errors carry their position inside the message.
            _ => ScenarioError::Schema {
                message: err.to_string(),
            },
        }
    })?;

    if dto.format_version != FORMAT_VERSION {
        return Err(ScenarioError::Schema {
            message: format!(
                "unsupported formatVersion `{}`; this build reads version \"{FORMAT_VERSION}\"",
                dto.format_version
            ),
        });
    }

    let welfare = welfare_to_core(&dto.welfare)?;
    let mut alternatives = Vec::with_capacity(dto.alternatives.len());
    for alt in &dto.alternatives {
        let context_good = format!("alternative `{}`, costGood", alt.id);
        let context_fail = format!("alternative `{}`, costFail", alt.id);
        alternatives.push(Alternative {
            id: alt.id.as_str().into(),
            p_cat: alt.p_cat,
            cost_good: alt.cost_good.to_core(&context_good)?,
            cost_fail: alt.cost_fail.to_core(&context_fail)?,
        });
    }

    let scenario = Scenario {
        alternatives,
        welfare,
        seed: dto.seed,
        samples_per_alternative: dto.samples_per_alternative,
    };
    let violations = validate_scenario(&scenario);
    if !violations.is_empty() {
        return Err(ScenarioError::Validation(violations));
    }

    Ok(ScenarioDocument {
        format_version: dto.format_version,
        metadata: dto.metadata,
        scenario,
    })
}

/// Serializes a document to its canonical text form.
///
/// Canonical means: fixed key order (the schema's documented order),
/// alternatives sorted by id, metadata keys alphabetical, two-space
/// indentation, shortest round-trip numbers, trailing newline. Serializing
/// the same document twice yields identical bytes.
pub fn serialize_scenario(doc: &ScenarioDocument) -> String {
    let mut alternatives: Vec<&Alternative> = doc.scenario.alternatives.iter().collect();
    alternatives.sort_by(|a, b| a.id.cmp(&b.id));

    let dto = DocumentDto {
        format_version: doc.format_version.clone(),
        metadata: doc.metadata.clone(),
        welfare: welfare_from_core(&doc.scenario.welfare),
        seed: doc.scenario.seed,
        samples_per_alternative: doc.scenario.samples_per_alternative,
        alternatives: alternatives
            .into_iter()
            .map(|alt| AlternativeDto {
                id: alt.id.as_str().to_string(),
                p_cat: alt.p_cat,
                cost_good: DistributionDto::from_core(&alt.cost_good),
                cost_fail: DistributionDto::from_core(&alt.cost_fail),
            })
            .collect(),
    };
    let mut text =
        serde_json::to_string_pretty(&dto).expect("scenario documents always serialize");
    text.push('\n');
    text
}

impl fmt::Display for ScenarioDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_scenario(self))
    }
}
