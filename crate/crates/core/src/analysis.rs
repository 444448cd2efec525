//! What-if tooling on top of the static solver.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::{Allocation, PossibilityFrontier, StaticScenario, Valuation};
use crate::static_solver::{solve_static, StaticSolution};

/// Observations further than this (relative) from the frontier are rejected.
pub const OBSERVATION_TOLERANCE: f64 = 1e-6;
pub const MAX_RELATIVE_STEP: f64 = 0.1;
pub const DEFAULT_RELATIVE_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    A,
    B,
    C,
    PLife,
    PJob,
}

impl Parameter {
    pub const ALL: [Parameter; 5] = [Self::A, Self::B, Self::C, Self::PLife, Self::PJob];

    pub fn name(&self) -> &'static str {
        match self {
            Self::A => "a",
            Self::B => "b",
            Self::C => "c",
            Self::PLife => "p_life",
            Self::PJob => "p_job",
        }
    }

    fn path(&self) -> &'static str {
        match self {
            Self::A => "frontier.a",
            Self::B => "frontier.b",
            Self::C => "frontier.c",
            Self::PLife => "valuation.p_life",
            Self::PJob => "valuation.p_job",
        }
    }

    pub fn value_in(&self, s: &StaticScenario) -> f64 {
        match self {
            Self::A => s.frontier.a(),
            Self::B => s.frontier.b(),
            Self::C => s.frontier.c(),
            Self::PLife => s.valuation.p_life(),
            Self::PJob => s.valuation.p_job(),
        }
    }

    /// Copy of `s` with this parameter set to `value`, revalidated.
    pub fn set_in(&self, s: &StaticScenario, value: f64) -> Result<StaticScenario> {
        let (f, v) = (&s.frontier, &s.valuation);
        let mut out = *s;
        match self {
            Self::A => out.frontier = PossibilityFrontier::new(value, f.b(), f.c())?,
            Self::B => out.frontier = PossibilityFrontier::new(f.a(), value, f.c())?,
            Self::C => out.frontier = PossibilityFrontier::new(f.a(), f.b(), value)?,
            Self::PLife => out.valuation = Valuation::new(value, v.p_job())?,
            Self::PJob => out.valuation = Valuation::new(v.p_life(), value)?,
        }
        Ok(out)
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Parameter {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ModelError::InvalidParameterName(s.to_string()))
    }
}

/// Central finite-difference derivatives of the static optimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sensitivity {
    pub parameter: Parameter,
    pub value: f64,
    /// Absolute step `h`; derivatives use `(f(x+h) − f(x−h)) / 2h`.
    pub step: f64,
    pub d_lives: f64,
    pub d_jobs: f64,
    pub d_z: f64,
    /// Shadow price at the base point; equals `d_z` when the parameter is `c`.
    pub multiplier: f64,
}

pub fn sensitivity(scenario: &StaticScenario, parameter: Parameter, relative_step: f64) -> Result<Sensitivity> {
    if !(relative_step > 0.0 && relative_step <= MAX_RELATIVE_STEP) {
        return Err(ModelError::StepOutOfRange(relative_step));
    }
    let value = parameter.value_in(scenario);
    let step = relative_step * value.abs();
    let out_of_domain = || ModelError::PerturbationOutOfDomain { field: parameter.path().into(), step };
    if step == 0.0 {
        return Err(out_of_domain());
    }
    let up = parameter.set_in(scenario, value + step).map_err(|_| out_of_domain())?;
    let down = parameter.set_in(scenario, value - step).map_err(|_| out_of_domain())?;
    let (hi, lo) = (solve_static(&up)?, solve_static(&down)?);
    let base = solve_static(scenario)?;
    // The realized spacing, not 2·step, after rounding of value ± step.
    let span = parameter.value_in(&up) - parameter.value_in(&down);
    Ok(Sensitivity {
        parameter,
        value,
        step,
        d_lives: (hi.allocation.lives_saved - lo.allocation.lives_saved) / span,
        d_jobs: (hi.allocation.jobs_saved - lo.allocation.jobs_saved) / span,
        d_z: (hi.z_star - lo.z_star) / span,
        multiplier: base.multiplier,
    })
}

/// The `p_life / p_job` ratio under which `observed` would be the optimum: `a·lives / (b·jobs)`.
pub fn infer_valuation_ratio(frontier: &PossibilityFrontier, observed: &Allocation) -> Result<f64> {
    infer_valuation_ratio_within(frontier, observed, OBSERVATION_TOLERANCE)
}

/// [`infer_valuation_ratio`] with an explicit bound on the relative constraint residual.
pub fn infer_valuation_ratio_within(
    frontier: &PossibilityFrontier,
    observed: &Allocation,
    tolerance: f64,
) -> Result<f64> {
    let (lives, jobs) = (observed.lives_saved, observed.jobs_saved);
    if !(lives > 0.0 && jobs > 0.0 && lives.is_finite() && jobs.is_finite()) {
        return Err(ModelError::CornerObservation { lives, jobs });
    }
    let residual = frontier.relative_residual(observed);
    if !(residual <= tolerance) {
        return Err(ModelError::OffFrontierObservation { residual });
    }
    Ok(frontier.a() * lives / (frontier.b() * jobs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub label: String,
    pub solution: StaticSolution,
    pub delta_lives: f64,
    pub delta_jobs: f64,
    pub delta_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioComparison {
    pub base: StaticSolution,
    pub rows: Vec<ComparisonRow>,
}

/// Solves every variant independently and reports its difference from the base.
pub fn compare_scenarios(base: &StaticScenario, variants: &[(String, StaticScenario)]) -> Result<ScenarioComparison> {
    let base_solution = solve_static(base)?;
    let rows = variants
        .iter()
        .map(|(label, scenario)| {
            let solution = solve_static(scenario)?;
            Ok(ComparisonRow {
                label: label.clone(),
                solution,
                delta_lives: solution.allocation.lives_saved - base_solution.allocation.lives_saved,
                delta_jobs: solution.allocation.jobs_saved - base_solution.allocation.jobs_saved,
                delta_z: solution.z_star - base_solution.z_star,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioComparison { base: base_solution, rows })
}
