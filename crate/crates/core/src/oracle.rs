//! Brute-force reference: evaluate the objective on a dense frontier trace and
//! keep the best point. Shares nothing with the closed forms except the frontier
//! parameterization, so it can be used to check them.

use serde::Serialize;

use crate::dynamic::{decouple_dynamic, DynamicScenario};
use crate::error::{ModelError, Result};
use crate::model::{Allocation, PossibilityFrontier, Valuation};

pub const MIN_SWEEP_POINTS: usize = 100;
/// Sweep density used by default in tests and services.
pub const DEFAULT_SWEEP_POINTS: usize = 100_000;
/// Sweep density used by the acceptance runs.
pub const ACCEPTANCE_SWEEP_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepResult {
    pub best_allocation: Allocation,
    pub best_z: f64,
    pub n_points: usize,
    pub theta_star: f64,
}

/// Best of `n_points` uniformly spaced trace points.
///
/// Points are visited from the lives intercept towards the jobs intercept and only a
/// strictly better value replaces the incumbent, so exact ties keep the point with more lives.
pub fn oracle_static(frontier: &PossibilityFrontier, valuation: &Valuation, n_points: usize) -> Result<SweepResult> {
    if n_points < MIN_SWEEP_POINTS {
        return Err(ModelError::InvalidPointCount { field: "n_points".into(), got: n_points, min: MIN_SWEEP_POINTS });
    }
    let (theta, point) = frontier.trace_point(0, n_points);
    let mut best = SweepResult { best_allocation: point, best_z: valuation.benefit(&point), n_points, theta_star: theta };
    for k in 1..n_points {
        let (theta, point) = frontier.trace_point(k, n_points);
        let z = valuation.benefit(&point);
        if z > best.best_z {
            best.best_allocation = point;
            best.best_z = z;
            best.theta_star = theta;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicSweep {
    /// Period-1 lives against period-2 jobs.
    pub constraint2: SweepResult,
    /// Period-2 lives against period-1 jobs.
    pub constraint1: SweepResult,
    pub total_z: f64,
}

/// Sweeps both subproblems of the two-period model with present-value prices.
pub fn oracle_dynamic(scenario: &DynamicScenario, n_points: usize) -> Result<DynamicSweep> {
    let (sub2, sub1) = decouple_dynamic(scenario);
    let constraint2 = oracle_static(&sub2.frontier, &sub2.valuation, n_points)?;
    let constraint1 = oracle_static(&sub1.frontier, &sub1.valuation, n_points)?;
    Ok(DynamicSweep { constraint2, constraint1, total_z: constraint2.best_z + constraint1.best_z })
}

/// Second-order lower bound on the sweep: `z_star·(1 − (π/(2n))²)`.
pub fn sweep_lower_bound(z_star: f64, n_points: usize) -> f64 {
    let h = std::f64::consts::PI / (2.0 * n_points as f64);
    z_star * (1.0 - h * h)
}
