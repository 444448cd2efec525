//! Human-readable rendering. Allocations and ratios use 4 decimals, benefits
//! and multipliers scientific notation; `--json` carries full precision.

use std::fmt::Write;

use tradeoff_core::analysis::Sensitivity;
use tradeoff_core::report::{ChainReport, DynamicReport, EnumerationReport, InferenceReport, OracleCheck, StaticReport};
use tradeoff_core::static_solver::KktReport;

fn line(out: &mut String, label: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{label:<24}{value}");
}

fn benefit(z: f64) -> String {
    format!("{z:.3e} ({z:.0})")
}

// Residuals of exactly zero may carry a sign; print them unsigned.
fn residual(v: f64) -> String {
    format!("{:.2e}", v + 0.0)
}

fn kkt_status(passed: bool, max_residual: f64) -> String {
    format!("{} (max residual {max_residual:.2e})", if passed { "passed" } else { "FAILED" })
}

fn oracle_line(out: &mut String, oracle: &Option<OracleCheck>, unit_scale: f64) {
    if let Some(o) = oracle {
        line(
            out,
            "oracle",
            format!(
                "{} points, best Z {:.3e}, gap {:.2e} (relative)",
                o.n_points,
                o.best_z * unit_scale,
                o.relative_gap
            ),
        );
    }
}

fn static_kkt(out: &mut String, kkt: &KktReport) {
    line(out, "KKT", kkt_status(kkt.passed, kkt.max_residual));
    line(out, "  stationarity (lives)", residual(kkt.stationarity_lives));
    line(out, "  stationarity (jobs)", residual(kkt.stationarity_jobs));
    line(out, "  feasibility", residual(kkt.feasibility));
}

pub fn static_text(r: &StaticReport) -> String {
    let mut out = String::new();
    let s = &r.solution;
    line(&mut out, "lives saved", format!("{:.4}", s.allocation.lives_saved));
    line(&mut out, "jobs saved", format!("{:.4}", s.allocation.jobs_saved));
    line(&mut out, "multiplier", format!("{:.4e}", s.multiplier));
    line(&mut out, "Z*", benefit(r.z_scaled));
    match r.optimality_ratio {
        Some(ratio) => line(&mut out, "lives/jobs", format!("{ratio:.4}")),
        None => line(&mut out, "lives/jobs", "undefined (zero job price)"),
    }
    static_kkt(&mut out, &r.diagnostics.kkt);
    oracle_line(&mut out, &r.diagnostics.oracle, r.unit_scale);
    out.trim_end().to_string()
}

pub fn dynamic_text(r: &DynamicReport) -> String {
    let mut out = String::new();
    let (s, a) = (&r.solution, &r.solution.allocation);
    line(&mut out, "discount rate", r.discount_rate);
    line(&mut out, "lives saved, period 1", format!("{:.4}", a.lives_period1));
    line(&mut out, "lives saved, period 2", format!("{:.4}", a.lives_period2));
    line(&mut out, "jobs saved, period 1", format!("{:.4}", a.jobs_period1));
    line(&mut out, "jobs saved, period 2", format!("{:.4}", a.jobs_period2));
    line(&mut out, "multiplier 1", format!("{:.4e}", s.multiplier1));
    line(&mut out, "multiplier 2", format!("{:.4e}", s.multiplier2));
    line(&mut out, "Z_d*", benefit(r.z_scaled));
    match r.optimality_ratios {
        Some([r1, r2]) => {
            line(&mut out, "lives1/jobs2", format!("{r1:.4}"));
            line(&mut out, "lives2/jobs1", format!("{r2:.4}"));
        }
        None => line(&mut out, "optimality ratios", "undefined (zero job price)"),
    }
    let k = &r.diagnostics.kkt;
    line(&mut out, "KKT", kkt_status(k.passed, k.max_residual));
    for (label, v) in [
        ("  stationarity (lives1)", k.stationarity_lives1),
        ("  stationarity (jobs1)", k.stationarity_jobs1),
        ("  stationarity (lives2)", k.stationarity_lives2),
        ("  stationarity (jobs2)", k.stationarity_jobs2),
        ("  feasibility 1", k.feasibility1),
        ("  feasibility 2", k.feasibility2),
    ] {
        line(&mut out, label, residual(v));
    }
    oracle_line(&mut out, &r.diagnostics.oracle, r.unit_scale);
    out.trim_end().to_string()
}

pub fn chain_text(r: &ChainReport) -> String {
    let mut out = String::new();
    line(&mut out, "horizon", r.horizon);
    line(&mut out, "discount rate", r.discount_rate);
    let _ = writeln!(
        out,
        "{:>3}  {:>7}  {:>6}  {:>10}  {:>10}  {:>12}  {:>10}",
        "#", "lives t", "jobs t", "lives", "jobs", "multiplier", "Z (pv)"
    );
    for (k, e) in r.solution.entries.iter().enumerate() {
        let s = &e.solution;
        let _ = writeln!(
            out,
            "{:>3}  {:>7}  {:>6}  {:>10.4}  {:>10.4}  {:>12.4e}  {:>10.3e}",
            k + 1,
            e.lives_period,
            e.jobs_period,
            s.allocation.lives_saved,
            s.allocation.jobs_saved,
            s.multiplier,
            s.z_star * r.unit_scale
        );
    }
    line(&mut out, "Z*", benefit(r.z_scaled));
    let failed = r.diagnostics.kkt.iter().filter(|k| !k.passed).count();
    let worst = r.diagnostics.kkt.iter().map(|k| k.max_residual).fold(0.0, f64::max);
    line(&mut out, "KKT", kkt_status(failed == 0, worst));
    oracle_line(&mut out, &r.diagnostics.oracle, r.unit_scale);
    out.trim_end().to_string()
}

pub fn enumeration_text(r: &EnumerationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>5}  {:>10}  {:>10}  {:>10}", "point", "lives", "jobs", "Z");
    for (k, (row, z)) in r.table.rows.iter().zip(&r.z_scaled).enumerate() {
        let mark = if r.table.maximizers.contains(&k) { " *" } else { "" };
        let _ = writeln!(
            out,
            "{:>5}  {:>10.4}  {:>10.4}  {:>10.3e}{mark}",
            k + 1,
            row.allocation.lives_saved,
            row.allocation.jobs_saved,
            z
        );
    }
    let best = &r.table.rows[r.table.argmax];
    let _ = write!(
        out,
        "argmax: point {} ({:.4}, {:.4}), Z = {:.3e}",
        r.table.argmax + 1,
        best.allocation.lives_saved,
        best.allocation.jobs_saved,
        r.z_scaled[r.table.argmax]
    );
    if r.table.tied {
        let others: Vec<String> = r.table.maximizers.iter().map(|i| (i + 1).to_string()).collect();
        let _ = write!(out, " (tied: points {})", others.join(", "));
    }
    out
}

pub fn sensitivity_text(s: &Sensitivity) -> String {
    let mut out = String::new();
    line(&mut out, "parameter", s.parameter);
    line(&mut out, "value", s.value);
    line(&mut out, "step", format!("{:.4e}", s.step));
    line(&mut out, "d lives / d param", format!("{:.4e}", s.d_lives));
    line(&mut out, "d jobs / d param", format!("{:.4e}", s.d_jobs));
    line(&mut out, "d Z / d param", format!("{:.4e}", s.d_z));
    line(&mut out, "multiplier", format!("{:.4e}", s.multiplier));
    out.trim_end().to_string()
}

pub fn inference_text(r: &InferenceReport) -> String {
    let mut out = String::new();
    line(&mut out, "p_life / p_job", format!("{:.4}", r.ratio));
    line(&mut out, "relative residual", format!("{:.2e}", r.relative_residual));
    out.trim_end().to_string()
}
