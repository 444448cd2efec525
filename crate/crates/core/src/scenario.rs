//! Versioned JSON scenario format shared by the CLI and the HTTP service.
//!
//! ```json
//! {
//!   "version": "1",
//!   "kind": "static",
//!   "unit_scale": 1000000,
//!   "payload": {
//!     "frontier": { "a": 10, "b": 0.1, "c": 10 },
//!     "valuation": { "p_life": 1000000, "p_job": 60000 }
//!   }
//! }
//! ```
//!
//! The `*Spec` types mirror the wire shape and reject unknown fields; `validate`
//! turns them into model types, reporting the dotted path of the first bad value.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamic::{ChainScenario, CrossConstraint, DynamicScenario, PeriodPrices};
use crate::error::ModelError;
use crate::model::{Allocation, PointSet, PossibilityFrontier, StaticScenario, Valuation};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl FrontierSpec {
    pub fn validate(&self) -> Result<PossibilityFrontier, ModelError> {
        PossibilityFrontier::new(self.a, self.b, self.c)
    }
}

impl From<&PossibilityFrontier> for FrontierSpec {
    fn from(f: &PossibilityFrontier) -> Self {
        Self { a: f.a(), b: f.b(), c: f.c() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationSpec {
    pub p_life: f64,
    pub p_job: f64,
}

impl ValuationSpec {
    pub fn validate(&self) -> Result<Valuation, ModelError> {
        Valuation::new(self.p_life, self.p_job)
    }

    fn validate_period(&self) -> Result<PeriodPrices, ModelError> {
        PeriodPrices::new(self.p_life, self.p_job)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticSpec {
    pub frontier: FrontierSpec,
    pub valuation: ValuationSpec,
}

impl StaticSpec {
    pub fn validate(&self) -> Result<StaticScenario, ModelError> {
        Ok(StaticScenario::new(
            self.frontier.validate().map_err(|e| e.within("frontier"))?,
            self.valuation.validate().map_err(|e| e.within("valuation"))?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicSpec {
    /// Couples period-2 lives with period-1 jobs.
    pub constraint1: FrontierSpec,
    /// Couples period-1 lives with period-2 jobs.
    pub constraint2: FrontierSpec,
    pub period1: ValuationSpec,
    pub period2: ValuationSpec,
    pub discount_rate: f64,
}

impl DynamicSpec {
    pub fn validate(&self) -> Result<DynamicScenario, ModelError> {
        DynamicScenario::new(
            self.constraint1.validate().map_err(|e| e.within("constraint1"))?,
            self.constraint2.validate().map_err(|e| e.within("constraint2"))?,
            self.period1.validate_period().map_err(|e| e.within("period1"))?,
            self.period2.validate_period().map_err(|e| e.within("period2"))?,
            self.discount_rate,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConstraintSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lives_period: usize,
    pub jobs_period: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub discount_rate: f64,
    /// Prices of periods 1..=T.
    pub prices: Vec<ValuationSpec>,
    pub constraints: Vec<ChainConstraintSpec>,
}

impl ChainSpec {
    pub fn validate(&self) -> Result<ChainScenario, ModelError> {
        let prices = self
            .prices
            .iter()
            .enumerate()
            .map(|(t, p)| p.validate_period().map_err(|e| e.within(&format!("prices[{t}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        let constraints = self
            .constraints
            .iter()
            .enumerate()
            .map(|(k, c)| {
                Ok(CrossConstraint {
                    frontier: PossibilityFrontier::new(c.a, c.b, c.c)
                        .map_err(|e| e.within(&format!("constraints[{k}]")))?,
                    lives_period: c.lives_period,
                    jobs_period: c.jobs_period,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        ChainScenario::new(constraints, prices, self.discount_rate)
    }
}

impl From<&DynamicSpec> for ChainSpec {
    fn from(d: &DynamicSpec) -> Self {
        let con = |f: &FrontierSpec, lives_period, jobs_period| ChainConstraintSpec {
            a: f.a,
            b: f.b,
            c: f.c,
            lives_period,
            jobs_period,
        };
        Self {
            discount_rate: d.discount_rate,
            prices: vec![d.period1, d.period2],
            constraints: vec![con(&d.constraint1, 2, 1), con(&d.constraint2, 1, 2)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteSpec {
    pub points: Vec<Allocation>,
    pub valuation: ValuationSpec,
}

impl DiscreteSpec {
    pub fn validate(&self) -> Result<(PointSet, Valuation), ModelError> {
        for (i, p) in self.points.iter().enumerate() {
            Allocation::new(p.lives_saved, p.jobs_saved).map_err(|e| e.within(&format!("points[{i}]")))?;
        }
        let points = PointSet::new(self.points.clone())?;
        Ok((points, self.valuation.validate().map_err(|e| e.within("valuation"))?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationSpec {
    pub frontier: FrontierSpec,
    pub observed: Allocation,
}

impl ObservationSpec {
    pub fn validate(&self) -> Result<(PossibilityFrontier, Allocation), ModelError> {
        let frontier = self.frontier.validate().map_err(|e| e.within("frontier"))?;
        let observed = Allocation::new(self.observed.lives_saved, self.observed.jobs_saved)
            .map_err(|e| e.within("observed"))?;
        Ok((frontier, observed))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Static,
    Dynamic,
    Chain,
    Discrete,
    Observation,
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Static => "static",
            Self::Dynamic => "dynamic",
            Self::Chain => "chain",
            Self::Discrete => "discrete",
            Self::Observation => "observation",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioPayload {
    Static(StaticSpec),
    Dynamic(DynamicSpec),
    Chain(ChainSpec),
    Discrete(DiscreteSpec),
    Observation(ObservationSpec),
}

impl ScenarioPayload {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            Self::Static(_) => ScenarioKind::Static,
            Self::Dynamic(_) => ScenarioKind::Dynamic,
            Self::Chain(_) => ScenarioKind::Chain,
            Self::Discrete(_) => ScenarioKind::Discrete,
            Self::Observation(_) => ScenarioKind::Observation,
        }
    }

    /// Checks the payload against the invariants of its kind.
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            Self::Static(s) => s.validate().map(drop),
            Self::Dynamic(s) => s.validate().map(drop),
            Self::Chain(s) => s.validate().map(drop),
            Self::Discrete(s) => s.validate().map(drop),
            Self::Observation(s) => s.validate().map(drop),
        }
    }
}

/// A parsed scenario file. The payload has been shape-checked and validated.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub version: String,
    pub unit_scale: f64,
    pub payload: ScenarioPayload,
}

fn default_unit_scale() -> f64 {
    1.0
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenarioFile {
    version: String,
    kind: ScenarioKind,
    #[serde(default = "default_unit_scale")]
    unit_scale: f64,
    payload: Value,
}

/// Why a scenario document or request body was refused.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    /// Not valid JSON, wrong types, missing or unknown fields.
    Malformed { path: String, message: String },
    UnsupportedVersion { found: String },
    /// Well-formed but violates a model invariant.
    Domain(ModelError),
}

impl ScenarioError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::Malformed { .. } => "MALFORMED",
            Self::UnsupportedVersion { .. } => "UNSUPPORTED_VERSION",
            Self::Domain(e) => e.code(),
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            Self::Malformed { path, .. } => Some(path),
            Self::UnsupportedVersion { .. } => Some("version"),
            Self::Domain(e) => e.field(),
        }
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Self::Domain(_))
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            code: self.code().to_string(),
            message: self.to_string(),
            path: self.path().filter(|p| !p.is_empty()).map(str::to_string),
        }
    }

    pub fn within(self, prefix: &str) -> Self {
        match self {
            Self::Malformed { path, message } => Self::Malformed {
                path: match (prefix.is_empty(), path.is_empty()) {
                    (true, _) => path,
                    (false, true) => prefix.to_string(),
                    (false, false) => format!("{prefix}.{path}"),
                },
                message,
            },
            Self::Domain(e) => Self::Domain(e.within(prefix)),
            other => other,
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Malformed { path, message } if path.is_empty() => write!(f, "malformed input: {message}"),
            Self::Malformed { path, message } => write!(f, "malformed input at `{path}`: {message}"),
            Self::UnsupportedVersion { found } => {
                write!(f, "unsupported format version `{found}` (expected `{FORMAT_VERSION}`)")
            }
            Self::Domain(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for ScenarioError {}

impl From<ModelError> for ScenarioError {
    fn from(e: ModelError) -> Self {
        Self::Domain(e)
    }
}

/// Wire form of an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

fn malformed<E: fmt::Display>(err: serde_path_to_error::Error<E>) -> ScenarioError {
    let path = err.path().to_string();
    ScenarioError::Malformed {
        path: if path == "." { String::new() } else { path },
        message: err.into_inner().to_string(),
    }
}

/// Deserializes JSON text, reporting the path of a shape error.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &[u8]) -> Result<T, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_slice(text);
    let value = serde_path_to_error::deserialize(de).map_err(malformed)?;
    Ok(value)
}

fn from_value<T: serde::de::DeserializeOwned>(value: Value) -> Result<T, ScenarioError> {
    serde_path_to_error::deserialize(value).map_err(malformed)
}

impl ScenarioFile {
    pub fn new(payload: ScenarioPayload) -> Self {
        Self { version: FORMAT_VERSION.into(), unit_scale: 1.0, payload }
    }

    pub fn kind(&self) -> ScenarioKind {
        self.payload.kind()
    }

    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let raw: RawScenarioFile = parse_json(text.as_bytes())?;
        if raw.version != FORMAT_VERSION {
            return Err(ScenarioError::UnsupportedVersion { found: raw.version });
        }
        if !(raw.unit_scale.is_finite() && raw.unit_scale > 0.0) {
            return Err(ModelError::NonPositiveParameter { field: "unit_scale".into(), value: raw.unit_scale }.into());
        }
        let payload = match raw.kind {
            ScenarioKind::Static => from_value(raw.payload).map(ScenarioPayload::Static),
            ScenarioKind::Dynamic => from_value(raw.payload).map(ScenarioPayload::Dynamic),
            ScenarioKind::Chain => from_value(raw.payload).map(ScenarioPayload::Chain),
            ScenarioKind::Discrete => from_value(raw.payload).map(ScenarioPayload::Discrete),
            ScenarioKind::Observation => from_value(raw.payload).map(ScenarioPayload::Observation),
        }
        .map_err(|e| e.within("payload"))?;
        payload.validate().map_err(|e| ScenarioError::Domain(e.within("payload")))?;
        Ok(Self { version: raw.version, unit_scale: raw.unit_scale, payload })
    }

    pub fn to_json_pretty(&self) -> String {
        let payload = match &self.payload {
            ScenarioPayload::Static(s) => serde_json::to_value(s),
            ScenarioPayload::Dynamic(s) => serde_json::to_value(s),
            ScenarioPayload::Chain(s) => serde_json::to_value(s),
            ScenarioPayload::Discrete(s) => serde_json::to_value(s),
            ScenarioPayload::Observation(s) => serde_json::to_value(s),
        }
        .expect("spec types serialize");
        let raw = RawScenarioFile {
            version: self.version.clone(),
            kind: self.kind(),
            unit_scale: self.unit_scale,
            payload,
        };
        serde_json::to_string_pretty(&raw).expect("scenario serializes")
    }
}
