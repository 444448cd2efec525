//! Delimited-text plot file: the frontier trace, the optimum and the tangent
//! iso-benefit line through it, one row per point.
//!
//! Columns are `series,theta,lives,jobs,z`. Tangent rows have no angle.

use std::fmt::Write;

use tradeoff_core::model::Allocation;
use tradeoff_core::{solve_static, ModelError, StaticScenario};

pub const HEADER: &str = "series,theta,lives,jobs,z";

fn series(label: &str, name: &str) -> String {
    if label.is_empty() {
        name.to_string()
    } else {
        format!("{label}.{name}")
    }
}

/// Endpoints of `p_life·lives + p_job·jobs = z` clipped to the quadrant. With one
/// price zero the line is parallel to an axis and spans the frontier's extent.
fn tangent(scenario: &StaticScenario, z: f64) -> [Allocation; 2] {
    let (pl, pj) = (scenario.valuation.p_life(), scenario.valuation.p_job());
    let (lives_max, jobs_max) = scenario.frontier.intercepts();
    let at = |lives_saved, jobs_saved| Allocation { lives_saved, jobs_saved };
    if pj == 0.0 {
        [at(z / pl, 0.0), at(z / pl, jobs_max)]
    } else if pl == 0.0 {
        [at(0.0, z / pj), at(lives_max, z / pj)]
    } else {
        [at(z / pl, 0.0), at(0.0, z / pj)]
    }
}

pub fn trace_file(subproblems: &[(String, StaticScenario)], n_points: usize) -> Result<String, ModelError> {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    for (label, scenario) in subproblems {
        let v = &scenario.valuation;
        let scale = scenario.unit_scale;
        let frontier = series(label, "frontier");
        for (theta, p) in scenario.frontier.trace_with_angles(n_points).map_err(|e| e.within("trace"))? {
            let z = v.benefit(&p) * scale;
            let _ = writeln!(out, "{frontier},{theta},{},{},{z}", p.lives_saved, p.jobs_saved);
        }
        let solution = solve_static(scenario)?;
        let opt = solution.allocation;
        let (a, b) = (scenario.frontier.a(), scenario.frontier.b());
        let theta = (b.sqrt() * opt.jobs_saved).atan2(a.sqrt() * opt.lives_saved);
        let z = solution.z_star * scale;
        let _ = writeln!(out, "{},{theta},{},{},{z}", series(label, "optimum"), opt.lives_saved, opt.jobs_saved);
        let name = series(label, "tangent");
        for p in tangent(scenario, solution.z_star) {
            let _ = writeln!(out, "{name},,{},{},{z}", p.lives_saved, p.jobs_saved);
        }
    }
    Ok(out)
}
