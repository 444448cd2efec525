//! Request bodies. Each mirrors the scenario payload of the same kind with a few
//! optional knobs; unknown fields are rejected.

use serde::Deserialize;

use tradeoff_core::analysis::{Parameter, DEFAULT_RELATIVE_STEP, MAX_RELATIVE_STEP, OBSERVATION_TOLERANCE};
use tradeoff_core::model::{Allocation, PointSet, PossibilityFrontier, ShiftSpec, StaticScenario, Valuation};
use tradeoff_core::oracle::{DEFAULT_SWEEP_POINTS, MIN_SWEEP_POINTS};
use tradeoff_core::scenario::{
    ChainConstraintSpec, ChainSpec, DiscreteSpec, DynamicSpec, FrontierSpec, ObservationSpec, StaticSpec, ValuationSpec,
};
use tradeoff_core::{ChainScenario, DynamicScenario, ModelError};

/// Upper bound on client-requested sweep densities.
pub const MAX_ORACLE_POINTS: usize = 10_000_000;
/// Upper bound on client-requested trace lengths.
pub const MAX_TRACE_POINTS: usize = 100_000;

fn check_unit_scale(unit_scale: Option<f64>) -> Result<f64, ModelError> {
    let s = unit_scale.unwrap_or(1.0);
    if !s.is_finite() {
        return Err(ModelError::NonFiniteParameter { field: "unit_scale".into() });
    }
    if s <= 0.0 {
        return Err(ModelError::NonPositiveParameter { field: "unit_scale".into(), value: s });
    }
    Ok(s)
}

/// Sweep density to run, if any. `oracle_points` without `verify` is ignored.
pub fn oracle_points(verify: bool, requested: Option<usize>) -> Result<Option<usize>, RequestError> {
    if !verify {
        return Ok(None);
    }
    let n = requested.unwrap_or(DEFAULT_SWEEP_POINTS);
    if n < MIN_SWEEP_POINTS {
        return Err(ModelError::InvalidPointCount { field: "oracle_points".into(), got: n, min: MIN_SWEEP_POINTS }.into());
    }
    if n > MAX_ORACLE_POINTS {
        return Err(RequestError::LimitExceeded { path: "oracle_points".into(), got: n, limit: MAX_ORACLE_POINTS });
    }
    Ok(Some(n))
}

/// Why a well-formed request was refused.
#[derive(Debug, Clone, PartialEq)]
pub enum RequestError {
    Domain(ModelError),
    /// A domain error about an input the error itself does not name.
    Field { path: String, error: ModelError },
    /// A size knob above what the service is willing to compute.
    LimitExceeded { path: String, got: usize, limit: usize },
}

impl From<ModelError> for RequestError {
    fn from(e: ModelError) -> Self {
        Self::Domain(e)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticRequest {
    pub frontier: FrontierSpec,
    pub valuation: ValuationSpec,
    #[serde(default)]
    pub unit_scale: Option<f64>,
    #[serde(default)]
    pub verify: bool,
    #[serde(default)]
    pub oracle_points: Option<usize>,
}

impl StaticRequest {
    pub fn validate(&self) -> Result<(StaticScenario, Option<usize>), RequestError> {
        let spec = StaticSpec { frontier: self.frontier, valuation: self.valuation };
        let scenario = spec.validate()?.with_unit_scale(check_unit_scale(self.unit_scale)?)?;
        Ok((scenario, oracle_points(self.verify, self.oracle_points)?))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicRequest {
    pub constraint1: FrontierSpec,
    pub constraint2: FrontierSpec,
    pub period1: ValuationSpec,
    pub period2: ValuationSpec,
    pub discount_rate: f64,
    #[serde(default)]
    pub unit_scale: Option<f64>,
    #[serde(default)]
    pub verify: bool,
    #[serde(default)]
    pub oracle_points: Option<usize>,
}

impl DynamicRequest {
    pub fn validate(&self) -> Result<(DynamicScenario, Option<usize>), RequestError> {
        let spec = DynamicSpec {
            constraint1: self.constraint1,
            constraint2: self.constraint2,
            period1: self.period1,
            period2: self.period2,
            discount_rate: self.discount_rate,
        };
        let scenario = spec.validate()?.with_unit_scale(check_unit_scale(self.unit_scale)?)?;
        Ok((scenario, oracle_points(self.verify, self.oracle_points)?))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainRequest {
    pub discount_rate: f64,
    pub prices: Vec<ValuationSpec>,
    pub constraints: Vec<ChainConstraintSpec>,
    #[serde(default)]
    pub unit_scale: Option<f64>,
    #[serde(default)]
    pub verify: bool,
    #[serde(default)]
    pub oracle_points: Option<usize>,
}

impl ChainRequest {
    pub fn validate(&self) -> Result<(ChainScenario, Option<usize>), RequestError> {
        let spec = ChainSpec {
            discount_rate: self.discount_rate,
            prices: self.prices.clone(),
            constraints: self.constraints.clone(),
        };
        let chain = spec.validate()?.with_unit_scale(check_unit_scale(self.unit_scale)?)?;
        Ok((chain, oracle_points(self.verify, self.oracle_points)?))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateRequest {
    pub points: Vec<Allocation>,
    pub valuation: ValuationSpec,
    #[serde(default)]
    pub unit_scale: Option<f64>,
}

impl EnumerateRequest {
    pub fn validate(&self) -> Result<(PointSet, Valuation, f64), ModelError> {
        let spec = DiscreteSpec { points: self.points.clone(), valuation: self.valuation };
        let (points, valuation) = spec.validate()?;
        Ok((points, valuation, check_unit_scale(self.unit_scale)?))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRequest {
    pub frontier: FrontierSpec,
    pub n: usize,
}

impl TraceRequest {
    pub fn validate(&self) -> Result<(PossibilityFrontier, usize), RequestError> {
        let frontier = self.frontier.validate().map_err(|e| e.within("frontier"))?;
        if self.n < 2 {
            return Err(ModelError::InvalidPointCount { field: "n".into(), got: self.n, min: 2 }.into());
        }
        if self.n > MAX_TRACE_POINTS {
            return Err(RequestError::LimitExceeded { path: "n".into(), got: self.n, limit: MAX_TRACE_POINTS });
        }
        Ok((frontier, self.n))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivityRequest {
    pub frontier: FrontierSpec,
    pub valuation: ValuationSpec,
    pub parameter: String,
    #[serde(default)]
    pub relative_step: Option<f64>,
}

impl SensitivityRequest {
    pub fn validate(&self) -> Result<(StaticScenario, Parameter, f64), RequestError> {
        let scenario = StaticSpec { frontier: self.frontier, valuation: self.valuation }.validate()?;
        let parameter = self
            .parameter
            .parse()
            .map_err(|error| RequestError::Field { path: "parameter".into(), error })?;
        let step = self.relative_step.unwrap_or(DEFAULT_RELATIVE_STEP);
        if !(step > 0.0 && step <= MAX_RELATIVE_STEP) {
            return Err(RequestError::Field { path: "relative_step".into(), error: ModelError::StepOutOfRange(step) });
        }
        Ok((scenario, parameter, step))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferRequest {
    pub frontier: FrontierSpec,
    pub observed: Allocation,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

impl InferRequest {
    pub fn validate(&self) -> Result<(PossibilityFrontier, Allocation, f64), ModelError> {
        let spec = ObservationSpec { frontier: self.frontier, observed: self.observed };
        let (frontier, observed) = spec.validate()?;
        let tolerance = match self.tolerance {
            None => OBSERVATION_TOLERANCE,
            Some(t) if t.is_finite() && t > 0.0 => t,
            Some(t) if !t.is_finite() => return Err(ModelError::NonFiniteParameter { field: "tolerance".into() }),
            Some(t) => return Err(ModelError::NonPositiveParameter { field: "tolerance".into(), value: t }),
        };
        Ok((frontier, observed, tolerance))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftRequest {
    pub frontier: FrontierSpec,
    pub shift: ShiftSpec,
    #[serde(default)]
    pub valuation: Option<ValuationSpec>,
}

impl ShiftRequest {
    pub fn validate(&self) -> Result<(PossibilityFrontier, ShiftSpec, Option<Valuation>), ModelError> {
        let frontier = self.frontier.validate().map_err(|e| e.within("frontier"))?;
        self.shift.validate().map_err(|e| e.within("shift"))?;
        let valuation = self
            .valuation
            .map(|v| v.validate().map_err(|e| e.within("valuation")))
            .transpose()?;
        Ok((frontier, self.shift, valuation))
    }
}
