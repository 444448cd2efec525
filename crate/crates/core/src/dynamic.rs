//! Two-period problem with cross-temporal frontiers and discounting, and its
//! T-period generalization as a chain of disjoint constraints.
//!
//! In the two-period model one frontier ties this period's jobs to next period's
//! lives and the other ties this period's lives to next period's jobs. Period-2
//! benefits are divided by `1 + i`; the constraints are not discounted.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{check_non_negative, ModelError, Result};
use crate::model::{Allocation, PossibilityFrontier, StaticScenario, Valuation};
use crate::static_solver::{kkt_summary, solve_on_frontier, StaticSolution};

/// Prices of one period. Unlike [`Valuation`] both may be zero, provided every
/// constraint still sees a positive price on one of its two variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodPrices {
    pub p_life: f64,
    pub p_job: f64,
}

impl PeriodPrices {
    pub fn new(p_life: f64, p_job: f64) -> Result<Self> {
        Ok(Self {
            p_life: check_non_negative("p_life", p_life)?,
            p_job: check_non_negative("p_job", p_job)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Lives,
    Jobs,
}

/// A decision variable: an outcome in a given (1-based) period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Variable {
    pub outcome: Outcome,
    pub period: usize,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.outcome {
            Outcome::Lives => "lives",
            Outcome::Jobs => "jobs",
        };
        write!(f, "{what} in period {}", self.period)
    }
}

/// Frontier `a·lives[lives_period]² + b·jobs[jobs_period]² = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossConstraint {
    pub frontier: PossibilityFrontier,
    pub lives_period: usize,
    pub jobs_period: usize,
}

impl CrossConstraint {
    pub fn lives(&self) -> Variable {
        Variable { outcome: Outcome::Lives, period: self.lives_period }
    }

    pub fn jobs(&self) -> Variable {
        Variable { outcome: Outcome::Jobs, period: self.jobs_period }
    }
}

fn check_discount_rate(rate: f64) -> Result<f64> {
    if !rate.is_finite() {
        return Err(ModelError::NonFiniteParameter { field: "discount_rate".into() });
    }
    if rate <= -1.0 {
        return Err(ModelError::InvalidDiscountRate { field: "discount_rate".into(), value: rate });
    }
    Ok(rate)
}

/// The two-period model.
///
/// `constraint1` couples period-2 lives with period-1 jobs;
/// `constraint2` couples period-1 lives with period-2 jobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicScenario {
    constraint1: PossibilityFrontier,
    constraint2: PossibilityFrontier,
    period1: PeriodPrices,
    period2: PeriodPrices,
    discount_rate: f64,
    unit_scale: f64,
}

impl DynamicScenario {
    pub fn new(
        constraint1: PossibilityFrontier,
        constraint2: PossibilityFrontier,
        period1: PeriodPrices,
        period2: PeriodPrices,
        discount_rate: f64,
    ) -> Result<Self> {
        let discount_rate = check_discount_rate(discount_rate)?;
        if period2.p_life == 0.0 && period1.p_job == 0.0 {
            return Err(ModelError::DegenerateValuation { field: "constraint1".into() });
        }
        if period1.p_life == 0.0 && period2.p_job == 0.0 {
            return Err(ModelError::DegenerateValuation { field: "constraint2".into() });
        }
        Ok(Self { constraint1, constraint2, period1, period2, discount_rate, unit_scale: 1.0 })
    }

    pub fn with_unit_scale(mut self, unit_scale: f64) -> Result<Self> {
        self.unit_scale = crate::error::check_positive("unit_scale", unit_scale)?;
        Ok(self)
    }

    pub fn constraint1(&self) -> CrossConstraint {
        CrossConstraint { frontier: self.constraint1, lives_period: 2, jobs_period: 1 }
    }

    pub fn constraint2(&self) -> CrossConstraint {
        CrossConstraint { frontier: self.constraint2, lives_period: 1, jobs_period: 2 }
    }

    pub fn period1(&self) -> PeriodPrices {
        self.period1
    }

    pub fn period2(&self) -> PeriodPrices {
        self.period2
    }

    pub fn discount_rate(&self) -> f64 {
        self.discount_rate
    }

    pub fn unit_scale(&self) -> f64 {
        self.unit_scale
    }

    /// Present value of an allocation.
    pub fn objective(&self, x: &DynamicAllocation) -> f64 {
        let g = 1.0 + self.discount_rate;
        self.period1.p_life * x.lives_period1
            + self.period1.p_job * x.jobs_period1
            + self.period2.p_life * x.lives_period2 / g
            + self.period2.p_job * x.jobs_period2 / g
    }

    /// The same model expressed as a two-period chain.
    pub fn to_chain(&self) -> ChainScenario {
        ChainScenario {
            constraints: vec![self.constraint1(), self.constraint2()],
            prices: vec![self.period1, self.period2],
            discount_rate: self.discount_rate,
            unit_scale: self.unit_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicAllocation {
    pub lives_period1: f64,
    pub jobs_period1: f64,
    pub lives_period2: f64,
    pub jobs_period2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicSolution {
    pub allocation: DynamicAllocation,
    /// Shadow price of `c₁`.
    pub multiplier1: f64,
    /// Shadow price of `c₂`.
    pub multiplier2: f64,
    /// Present value of the optimal allocation.
    pub z_star: f64,
}

/// Closed-form optimum of the two-period model.
///
/// With `g = 1 + i`:
///
/// ```text
/// lives1 = sqrt(c₂b₂²g²pL1² / (a₂b₂²g²pL1² + b₂a₂²pJ2²))
/// jobs2  = sqrt(c₂a₂²pJ2²   / (a₂b₂²g²pL1² + b₂a₂²pJ2²))
/// lives2 = sqrt(c₁b₁²pL2²   / (a₁b₁²pL2² + b₁a₁²g²pJ1²))
/// jobs1  = sqrt(c₁a₁²g²pJ1² / (a₁b₁²pL2² + b₁a₁²g²pJ1²))
/// ```
///
/// The `lives1` numerator needs `b₂²`; with a single `b₂` the point leaves the frontier.
pub fn solve_dynamic(scenario: &DynamicScenario) -> Result<DynamicSolution> {
    let g = 1.0 + scenario.discount_rate;
    let (p1, p2) = (scenario.period1, scenario.period2);
    let (k1, k2) = (&scenario.constraint1, &scenario.constraint2);

    // Each pair is rescaled by its largest weighted price; every root is
    // homogeneous of degree zero in the pair's prices.
    let s2 = (g * p1.p_life).max(p2.p_job);
    if !(s2 > 0.0) {
        return Err(ModelError::DegenerateValuation { field: "constraint2".into() });
    }
    let (gl1, j2) = (g * p1.p_life / s2, p2.p_job / s2);
    let (a2, b2, c2) = (k2.a(), k2.b(), k2.c());
    let denom2 = a2 * b2 * b2 * gl1 * gl1 + b2 * a2 * a2 * j2 * j2;
    let lives1 = (c2 * b2 * b2 * gl1 * gl1 / denom2).sqrt();
    let jobs2 = (c2 * a2 * a2 * j2 * j2 / denom2).sqrt();

    let s1 = p2.p_life.max(g * p1.p_job);
    if !(s1 > 0.0) {
        return Err(ModelError::DegenerateValuation { field: "constraint1".into() });
    }
    let (l2, gj1) = (p2.p_life / s1, g * p1.p_job / s1);
    let (a1, b1, c1) = (k1.a(), k1.b(), k1.c());
    let denom1 = a1 * b1 * b1 * l2 * l2 + b1 * a1 * a1 * gj1 * gj1;
    let lives2 = (c1 * b1 * b1 * l2 * l2 / denom1).sqrt();
    let jobs1 = (c1 * a1 * a1 * gj1 * gj1 / denom1).sqrt();

    let multiplier2 = if p1.p_life > 0.0 {
        p1.p_life / (2.0 * a2 * lives1)
    } else {
        p2.p_job / g / (2.0 * b2 * jobs2)
    };
    let multiplier1 = if p1.p_job > 0.0 {
        p1.p_job / (2.0 * b1 * jobs1)
    } else {
        p2.p_life / g / (2.0 * a1 * lives2)
    };

    let allocation = DynamicAllocation {
        lives_period1: lives1,
        jobs_period1: jobs1,
        lives_period2: lives2,
        jobs_period2: jobs2,
    };
    Ok(DynamicSolution { allocation, multiplier1, multiplier2, z_star: scenario.objective(&allocation) })
}

/// `(lives1 / jobs2, lives2 / jobs1)` at the optimum:
/// `(b₂(1+i)pL1 / (a₂pJ2), b₁pL2 / (a₁(1+i)pJ1))`.
pub fn dynamic_optimality_ratios(scenario: &DynamicScenario) -> Result<(f64, f64)> {
    let g = 1.0 + scenario.discount_rate;
    let (p1, p2) = (scenario.period1, scenario.period2);
    if p2.p_job == 0.0 {
        return Err(ModelError::ZeroPrice { field: "p_job2".into() });
    }
    if p1.p_job == 0.0 {
        return Err(ModelError::ZeroPrice { field: "p_job1".into() });
    }
    let (k1, k2) = (&scenario.constraint1, &scenario.constraint2);
    Ok((
        k2.b() * g * p1.p_life / (k2.a() * p2.p_job),
        k1.b() * p2.p_life / (k1.a() * g * p1.p_job),
    ))
}

/// Relative residuals of the six first-order conditions of the two-period Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicKktReport {
    pub stationarity_lives1: f64,
    pub stationarity_lives2: f64,
    pub stationarity_jobs1: f64,
    pub stationarity_jobs2: f64,
    pub feasibility1: f64,
    pub feasibility2: f64,
    pub multiplier1: f64,
    pub multiplier2: f64,
    pub multipliers_nonnegative: bool,
    pub max_residual: f64,
    pub passed: bool,
}

pub fn verify_dynamic_kkt(scenario: &DynamicScenario, solution: &DynamicSolution) -> DynamicKktReport {
    let g = 1.0 + scenario.discount_rate;
    let (p1, p2) = (scenario.period1, scenario.period2);
    let (k1, k2) = (&scenario.constraint1, &scenario.constraint2);
    let x = &solution.allocation;
    let (l1, l2) = (solution.multiplier1, solution.multiplier2);

    // Present-value prices; each stationarity residual is scaled by its own price,
    // or by the larger price of its constraint when its own is zero.
    let (pl1, pj1, pl2, pj2) = (p1.p_life, p1.p_job, p2.p_life / g, p2.p_job / g);
    let scale1 = pl2.max(pj1);
    let scale2 = pl1.max(pj2);
    let norm = |p: f64, fallback: f64| if p > 0.0 { p } else { fallback };

    let stationarity_lives1 = (pl1 - 2.0 * k2.a() * l2 * x.lives_period1) / norm(pl1, scale2);
    let stationarity_lives2 = (pl2 - 2.0 * k1.a() * l1 * x.lives_period2) / norm(pl2, scale1);
    let stationarity_jobs1 = (pj1 - 2.0 * k1.b() * l1 * x.jobs_period1) / norm(pj1, scale1);
    let stationarity_jobs2 = (pj2 - 2.0 * k2.b() * l2 * x.jobs_period2) / norm(pj2, scale2);
    let feasibility1 = -k1.residual(&Allocation { lives_saved: x.lives_period2, jobs_saved: x.jobs_period1 }) / k1.c();
    let feasibility2 = -k2.residual(&Allocation { lives_saved: x.lives_period1, jobs_saved: x.jobs_period2 }) / k2.c();

    let summary = kkt_summary(
        &[stationarity_lives1, stationarity_lives2, stationarity_jobs1, stationarity_jobs2, feasibility1],
        feasibility2,
        l1.min(l2),
    );
    DynamicKktReport {
        stationarity_lives1,
        stationarity_lives2,
        stationarity_jobs1,
        stationarity_jobs2,
        feasibility1,
        feasibility2,
        multiplier1: l1,
        multiplier2: l2,
        multipliers_nonnegative: summary.multiplier_nonnegative,
        max_residual: summary.max_residual,
        passed: summary.passed,
    }
}

/// Splits the two-period model into its two independent static problems.
///
/// Returns `(constraint 2 problem, constraint 1 problem)`. The first has lives =
/// period-1 lives, jobs = period-2 jobs, priced `(pL1, pJ2/(1+i))`. The second has
/// lives = period-2 lives, jobs = period-1 jobs, priced `(pL2/(1+i), pJ1)`.
pub fn decouple_dynamic(scenario: &DynamicScenario) -> (StaticScenario, StaticScenario) {
    let g = 1.0 + scenario.discount_rate;
    let (p1, p2) = (scenario.period1, scenario.period2);
    let sub = |frontier, p_life: f64, p_job: f64, which: &str| StaticScenario {
        frontier,
        // Validated when the dynamic scenario was built.
        valuation: Valuation::new(p_life, p_job).unwrap_or_else(|e| panic!("{which}: {e}")),
        unit_scale: scenario.unit_scale,
    };
    (
        sub(scenario.constraint2, p1.p_life, p2.p_job / g, "constraint2"),
        sub(scenario.constraint1, p2.p_life / g, p1.p_job, "constraint1"),
    )
}

/// T-period model: every constraint couples one lives variable with one jobs
/// variable and no variable appears twice. Variables that no constraint names are
/// not part of the model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainScenario {
    constraints: Vec<CrossConstraint>,
    prices: Vec<PeriodPrices>,
    discount_rate: f64,
    unit_scale: f64,
}

impl ChainScenario {
    /// `prices[t - 1]` are the prices of period `t`; the horizon is `prices.len()`.
    pub fn new(constraints: Vec<CrossConstraint>, prices: Vec<PeriodPrices>, discount_rate: f64) -> Result<Self> {
        let discount_rate = check_discount_rate(discount_rate)?;
        if prices.is_empty() {
            return Err(ModelError::EmptyCollection { field: "prices".into() });
        }
        if constraints.is_empty() {
            return Err(ModelError::EmptyCollection { field: "constraints".into() });
        }
        let horizon = prices.len();
        let mut seen = HashSet::new();
        for (k, con) in constraints.iter().enumerate() {
            let path = format!("constraints[{k}]");
            for (name, period) in [("lives_period", con.lives_period), ("jobs_period", con.jobs_period)] {
                if period == 0 || period > horizon {
                    return Err(ModelError::InvalidPeriod { field: format!("{path}.{name}"), period, horizon });
                }
            }
            for var in [con.lives(), con.jobs()] {
                if !seen.insert(var) {
                    return Err(ModelError::OverlappingVariables { field: path, variable: var.to_string() });
                }
            }
            if prices[con.lives_period - 1].p_life == 0.0 && prices[con.jobs_period - 1].p_job == 0.0 {
                return Err(ModelError::DegenerateValuation { field: path });
            }
        }
        Ok(Self { constraints, prices, discount_rate, unit_scale: 1.0 })
    }

    pub fn with_unit_scale(mut self, unit_scale: f64) -> Result<Self> {
        self.unit_scale = crate::error::check_positive("unit_scale", unit_scale)?;
        Ok(self)
    }

    pub fn constraints(&self) -> &[CrossConstraint] {
        &self.constraints
    }

    pub fn prices(&self) -> &[PeriodPrices] {
        &self.prices
    }

    pub fn horizon(&self) -> usize {
        self.prices.len()
    }

    pub fn discount_rate(&self) -> f64 {
        self.discount_rate
    }

    pub fn unit_scale(&self) -> f64 {
        self.unit_scale
    }

    /// `(1+i)^(t-1)`: period-`t` flows are divided by this to get present value.
    pub fn compounding(&self, period: usize) -> f64 {
        (1.0 + self.discount_rate).powi(period as i32 - 1)
    }

    /// The static problem of constraint `index`, priced in present value.
    pub fn subproblem(&self, index: usize) -> StaticScenario {
        let con = &self.constraints[index];
        let p_life = self.prices[con.lives_period - 1].p_life / self.compounding(con.lives_period);
        let p_job = self.prices[con.jobs_period - 1].p_job / self.compounding(con.jobs_period);
        StaticScenario {
            frontier: con.frontier,
            valuation: Valuation::new(p_life, p_job).expect("pair prices validated at construction"),
            unit_scale: self.unit_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainEntry {
    pub lives_period: usize,
    pub jobs_period: usize,
    /// Solution in present-value prices; `z_star` is this constraint's contribution.
    pub solution: StaticSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSolution {
    pub entries: Vec<ChainEntry>,
    pub total_z: f64,
}

/// Solves each constraint of the chain on its own, with prices discounted to period 1.
pub fn solve_chain(chain: &ChainScenario) -> Result<ChainSolution> {
    let entries = (0..chain.constraints.len())
        .map(|k| {
            let con = &chain.constraints[k];
            let sub = chain.subproblem(k);
            let solution = solve_on_frontier(&sub.frontier, &sub.valuation)
                .map_err(|e| e.within(&format!("constraints[{k}]")))?;
            Ok(ChainEntry { lives_period: con.lives_period, jobs_period: con.jobs_period, solution })
        })
        .collect::<Result<Vec<_>>>()?;
    let total_z = entries.iter().map(|e| e.solution.z_star).sum();
    Ok(ChainSolution { entries, total_z })
}
