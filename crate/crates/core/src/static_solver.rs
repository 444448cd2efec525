//! Single-period problem: maximize `p_life·lives + p_job·jobs` on the frontier.

use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::model::{Allocation, PointSet, PossibilityFrontier, StaticScenario, Valuation};

/// Relative tolerance below which every first-order residual must fall for a pass.
pub const KKT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticSolution {
    pub allocation: Allocation,
    /// Shadow price of the frontier level `c`.
    pub multiplier: f64,
    pub z_star: f64,
}

pub fn solve_static(scenario: &StaticScenario) -> Result<StaticSolution> {
    solve_on_frontier(&scenario.frontier, &scenario.valuation)
}

/// Closed-form optimum of a linear objective on the quarter ellipse.
///
/// Takes the positive roots of
/// `lives = sqrt(b²c·pL² / (ab²·pL² + a²b·pJ²))`, `jobs = sqrt(a²c·pJ² / (ab²·pL² + a²b·pJ²))`.
/// Prices are divided by the larger of the two first; the roots are homogeneous of
/// degree zero in the prices, so this only widens the range before overflow.
pub fn solve_on_frontier(frontier: &PossibilityFrontier, valuation: &Valuation) -> Result<StaticSolution> {
    let (a, b, c) = (frontier.a(), frontier.b(), frontier.c());
    let (p_life, p_job) = (valuation.p_life(), valuation.p_job());
    let scale = p_life.max(p_job);
    if !(scale > 0.0) {
        return Err(ModelError::DegenerateValuation { field: "valuation".into() });
    }
    let pl = p_life / scale;
    let pj = p_job / scale;

    let denom = a * b * b * pl * pl + a * a * b * pj * pj;
    let lives = (b * b * c * pl * pl / denom).sqrt();
    let jobs = (a * a * c * pj * pj / denom).sqrt();

    // Stationarity of whichever variable carries a positive price; at a zero-price
    // corner the other variable's condition would be 0/0.
    let multiplier = if p_life > 0.0 {
        p_life / (2.0 * a * lives)
    } else {
        p_job / (2.0 * b * jobs)
    };

    let allocation = Allocation { lives_saved: lives, jobs_saved: jobs };
    Ok(StaticSolution { allocation, multiplier, z_star: p_life * lives + p_job * jobs })
}

/// Optimal `lives / jobs` ratio, `b·pL / (a·pJ)`.
pub fn optimality_ratio(scenario: &StaticScenario) -> Result<f64> {
    let (f, v) = (&scenario.frontier, &scenario.valuation);
    if v.p_job() == 0.0 {
        return Err(ModelError::ZeroJobPrice);
    }
    Ok(f.b() * v.p_life() / (f.a() * v.p_job()))
}

/// First-order residuals of the static Lagrangian, each in relative terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KktReport {
    /// `(pL − 2aλ·lives) / pL`.
    pub stationarity_lives: f64,
    /// `(pJ − 2bλ·jobs) / pJ`.
    pub stationarity_jobs: f64,
    /// `(c − a·lives² − b·jobs²) / c`.
    pub feasibility: f64,
    pub multiplier: f64,
    pub multiplier_nonnegative: bool,
    pub max_residual: f64,
    pub passed: bool,
}

/// Checks a candidate solution against the first-order conditions.
///
/// A stationarity residual whose own price is zero is normalized by the larger price instead.
pub fn verify_kkt(scenario: &StaticScenario, solution: &StaticSolution) -> KktReport {
    let (f, v) = (&scenario.frontier, &scenario.valuation);
    let alloc = &solution.allocation;
    let lambda = solution.multiplier;
    let price_scale = v.p_life().max(v.p_job());
    let norm = |p: f64| if p > 0.0 { p } else { price_scale };

    let stationarity_lives = (v.p_life() - 2.0 * f.a() * lambda * alloc.lives_saved) / norm(v.p_life());
    let stationarity_jobs = (v.p_job() - 2.0 * f.b() * lambda * alloc.jobs_saved) / norm(v.p_job());
    let feasibility = -f.residual(alloc) / f.c();
    kkt_summary(&[stationarity_lives, stationarity_jobs], feasibility, lambda)
        .into_static(stationarity_lives, stationarity_jobs, feasibility)
}

pub(crate) struct KktSummary {
    pub multiplier: f64,
    pub multiplier_nonnegative: bool,
    pub max_residual: f64,
    pub passed: bool,
}

pub(crate) fn kkt_summary(stationarity: &[f64], feasibility: f64, multiplier: f64) -> KktSummary {
    let max_residual = stationarity
        .iter()
        .chain(std::iter::once(&feasibility))
        .map(|r| if r.is_nan() { f64::INFINITY } else { r.abs() })
        .fold(0.0, f64::max);
    let multiplier_nonnegative = multiplier >= 0.0;
    KktSummary {
        multiplier,
        multiplier_nonnegative,
        max_residual,
        passed: multiplier_nonnegative && max_residual <= KKT_TOLERANCE,
    }
}

impl KktSummary {
    fn into_static(self, stationarity_lives: f64, stationarity_jobs: f64, feasibility: f64) -> KktReport {
        KktReport {
            stationarity_lives,
            stationarity_jobs,
            feasibility,
            multiplier: self.multiplier,
            multiplier_nonnegative: self.multiplier_nonnegative,
            max_residual: self.max_residual,
            passed: self.passed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnumerationRow {
    pub allocation: Allocation,
    pub z: f64,
}

/// Benefit of every candidate in input order, plus the best one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationTable {
    pub rows: Vec<EnumerationRow>,
    /// Zero-based index of the chosen point.
    pub argmax: usize,
    /// True when more than one point attains the maximum.
    pub tied: bool,
    /// Every index attaining the maximum, ascending.
    pub maximizers: Vec<usize>,
}

/// Scores a finite candidate set. Exact ties go to the point saving more lives.
pub fn enumerate_discrete(points: &PointSet, valuation: &Valuation) -> Result<EnumerationTable> {
    if points.is_empty() {
        return Err(ModelError::EmptyPointSet);
    }
    let rows: Vec<EnumerationRow> = points
        .points()
        .iter()
        .map(|p| EnumerationRow { allocation: *p, z: valuation.benefit(p) })
        .collect();
    let best = rows.iter().map(|r| r.z).fold(f64::NEG_INFINITY, f64::max);
    let maximizers: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].z == best).collect();
    let mut argmax = maximizers[0];
    for &i in &maximizers[1..] {
        if rows[i].allocation.lives_saved > rows[argmax].allocation.lives_saved {
            argmax = i;
        }
    }
    Ok(EnumerationTable { rows, argmax, tied: maximizers.len() > 1, maximizers })
}
