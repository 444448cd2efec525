//! Lives-vs-jobs trade-off as constrained optimization.
//!
//! A possibility frontier `a·lives² + b·jobs² = c` bounds what can be saved; a
//! valuation prices each outcome. The crate provides closed-form optima for the
//! single-period and two-period (discounted, cross-temporal) problems, a T-period
//! chain generalization, a brute-force sweep to check them, sensitivity and
//! inference tooling, and the versioned JSON scenario format used by the CLI and
//! the HTTP service.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamic;
pub mod error;
pub mod model;
pub mod oracle;
pub mod report;
pub mod sampling;
pub mod scenario;
pub mod static_solver;

pub use analysis::{compare_scenarios, infer_valuation_ratio, sensitivity, Parameter};
pub use dynamic::{
    decouple_dynamic, dynamic_optimality_ratios, solve_chain, solve_dynamic, verify_dynamic_kkt, ChainScenario,
    CrossConstraint, DynamicScenario, DynamicSolution, PeriodPrices,
};
pub use error::{ModelError, Result};
pub use model::{validate_frontier, Allocation, PointSet, PossibilityFrontier, ShiftSpec, StaticScenario, Valuation};
pub use oracle::{oracle_dynamic, oracle_static, SweepResult};
pub use static_solver::{enumerate_discrete, optimality_ratio, solve_static, verify_kkt, StaticSolution};
