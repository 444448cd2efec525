//! Serializable result documents. The CLI's `--json` output and the service's
//! response bodies are both produced here, so the two cannot drift apart.

use serde::Serialize;

use crate::analysis::{compare_scenarios, infer_valuation_ratio_within, sensitivity, Parameter, ScenarioComparison, Sensitivity};
use crate::dynamic::{
    dynamic_optimality_ratios, solve_chain, solve_dynamic, verify_dynamic_kkt, ChainScenario, ChainSolution,
    DynamicKktReport, DynamicScenario, DynamicSolution,
};
use crate::error::Result;
use crate::model::{Allocation, PointSet, PossibilityFrontier, ShiftSpec, StaticScenario, Valuation};
use crate::oracle::{oracle_dynamic, oracle_static};
use crate::static_solver::{
    enumerate_discrete, optimality_ratio, solve_static, verify_kkt, EnumerationTable, KktReport, StaticSolution,
};

/// Brute-force comparison attached when verification is requested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleCheck {
    pub n_points: usize,
    pub best_z: f64,
    /// `z_star − best_z`; nonnegative when the closed form is a true maximum.
    pub gap: f64,
    pub relative_gap: f64,
}

impl OracleCheck {
    fn new(z_star: f64, best_z: f64, n_points: usize) -> Self {
        let gap = z_star - best_z;
        Self { n_points, best_z, gap, relative_gap: if z_star != 0.0 { gap / z_star.abs() } else { gap } }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticDiagnostics {
    pub kkt: KktReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticReport {
    pub solution: StaticSolution,
    /// `lives / jobs` at the optimum; absent when the job price is zero.
    pub optimality_ratio: Option<f64>,
    pub unit_scale: f64,
    /// `z_star` expressed per person rather than per allocation unit.
    pub z_scaled: f64,
    pub diagnostics: StaticDiagnostics,
}

/// `oracle_points` of `None` skips the brute-force check.
pub fn static_report(scenario: &StaticScenario, oracle_points: Option<usize>) -> Result<StaticReport> {
    let solution = solve_static(scenario)?;
    let oracle = oracle_points
        .map(|n| oracle_static(&scenario.frontier, &scenario.valuation, n).map(|s| OracleCheck::new(solution.z_star, s.best_z, n)))
        .transpose()?;
    Ok(StaticReport {
        solution,
        optimality_ratio: optimality_ratio(scenario).ok(),
        unit_scale: scenario.unit_scale,
        z_scaled: solution.z_star * scenario.unit_scale,
        diagnostics: StaticDiagnostics { kkt: verify_kkt(scenario, &solution), oracle },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicDiagnostics {
    pub kkt: DynamicKktReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicReport {
    pub solution: DynamicSolution,
    /// `[lives1 / jobs2, lives2 / jobs1]`; absent when a job price is zero.
    pub optimality_ratios: Option<[f64; 2]>,
    pub discount_rate: f64,
    pub unit_scale: f64,
    pub z_scaled: f64,
    pub diagnostics: DynamicDiagnostics,
}

pub fn dynamic_report(scenario: &DynamicScenario, oracle_points: Option<usize>) -> Result<DynamicReport> {
    let solution = solve_dynamic(scenario)?;
    let oracle = oracle_points
        .map(|n| oracle_dynamic(scenario, n).map(|s| OracleCheck::new(solution.z_star, s.total_z, n)))
        .transpose()?;
    Ok(DynamicReport {
        solution,
        optimality_ratios: dynamic_optimality_ratios(scenario).ok().map(|(r1, r2)| [r1, r2]),
        discount_rate: scenario.discount_rate(),
        unit_scale: scenario.unit_scale(),
        z_scaled: solution.z_star * scenario.unit_scale(),
        diagnostics: DynamicDiagnostics { kkt: verify_dynamic_kkt(scenario, &solution), oracle },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainDiagnostics {
    /// One report per constraint, in present-value prices.
    pub kkt: Vec<KktReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub solution: ChainSolution,
    pub horizon: usize,
    pub discount_rate: f64,
    pub unit_scale: f64,
    pub z_scaled: f64,
    pub diagnostics: ChainDiagnostics,
}

pub fn chain_report(chain: &ChainScenario, oracle_points: Option<usize>) -> Result<ChainReport> {
    let solution = solve_chain(chain)?;
    let kkt = solution
        .entries
        .iter()
        .enumerate()
        .map(|(k, e)| verify_kkt(&chain.subproblem(k), &e.solution))
        .collect();
    let oracle = match oracle_points {
        Some(n) => {
            let mut total = 0.0;
            for k in 0..chain.constraints().len() {
                let sub = chain.subproblem(k);
                total += oracle_static(&sub.frontier, &sub.valuation, n)?.best_z;
            }
            Some(OracleCheck::new(solution.total_z, total, n))
        }
        None => None,
    };
    Ok(ChainReport {
        z_scaled: solution.total_z * chain.unit_scale(),
        solution,
        horizon: chain.horizon(),
        discount_rate: chain.discount_rate(),
        unit_scale: chain.unit_scale(),
        diagnostics: ChainDiagnostics { kkt, oracle },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationReport {
    pub table: EnumerationTable,
    pub unit_scale: f64,
    /// Benefit of every row in per-person terms.
    pub z_scaled: Vec<f64>,
}

pub fn enumeration_report(points: &PointSet, valuation: &Valuation, unit_scale: f64) -> Result<EnumerationReport> {
    let table = enumerate_discrete(points, valuation)?;
    let z_scaled = table.rows.iter().map(|r| r.z * unit_scale).collect();
    Ok(EnumerationReport { table, unit_scale, z_scaled })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub theta: f64,
    pub lives_saved: f64,
    pub jobs_saved: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub intercepts: Allocation,
    pub points: Vec<TracePoint>,
}

pub fn trace_report(frontier: &PossibilityFrontier, n_points: usize) -> Result<TraceReport> {
    let points = frontier
        .trace_with_angles(n_points)?
        .into_iter()
        .map(|(theta, p)| TracePoint { theta, lives_saved: p.lives_saved, jobs_saved: p.jobs_saved })
        .collect();
    let (lives, jobs) = frontier.intercepts();
    Ok(TraceReport { intercepts: Allocation { lives_saved: lives, jobs_saved: jobs }, points })
}

pub fn sensitivity_report(scenario: &StaticScenario, parameter: Parameter, relative_step: f64) -> Result<Sensitivity> {
    sensitivity(scenario, parameter, relative_step)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InferenceReport {
    /// Implied `p_life / p_job`.
    pub ratio: f64,
    pub relative_residual: f64,
}

pub fn inference_report(frontier: &PossibilityFrontier, observed: &Allocation, tolerance: f64) -> Result<InferenceReport> {
    Ok(InferenceReport {
        ratio: infer_valuation_ratio_within(frontier, observed, tolerance)?,
        relative_residual: frontier.relative_residual(observed),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftReport {
    pub before: PossibilityFrontier,
    pub after: PossibilityFrontier,
    pub intercepts_before: Allocation,
    pub intercepts_after: Allocation,
    /// Present when a valuation was supplied: optimum before (base) and after the shift.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ScenarioComparison>,
}

pub fn shift_report(frontier: &PossibilityFrontier, shift: &ShiftSpec, valuation: Option<&Valuation>) -> Result<ShiftReport> {
    let after = frontier.apply_shift(shift)?;
    let to_alloc = |(l, j): (f64, f64)| Allocation { lives_saved: l, jobs_saved: j };
    let comparison = valuation
        .map(|v| {
            compare_scenarios(&StaticScenario::new(*frontier, *v), &[("shifted".to_string(), StaticScenario::new(after, *v))])
        })
        .transpose()?;
    Ok(ShiftReport {
        before: *frontier,
        after,
        intercepts_before: to_alloc(frontier.intercepts()),
        intercepts_after: to_alloc(after.intercepts()),
        comparison,
    })
}
