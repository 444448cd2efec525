//! Domain types shared by every solver: the elliptic possibility frontier,
//! per-period valuations, allocations and frontier shifts.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{check_non_negative, check_positive, ModelError, Result};

/// The quarter ellipse `a·lives² + b·jobs² = c` in the nonnegative quadrant.
///
/// Larger `a` (resp. `b`) makes lives (resp. jobs) more expensive at the margin;
/// `c` is the overall attainable level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PossibilityFrontier {
    a: f64,
    b: f64,
    c: f64,
}

impl PossibilityFrontier {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        Ok(Self {
            a: check_positive("a", a)?,
            b: check_positive("b", b)?,
            c: check_positive("c", c)?,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `(sqrt(c/a), sqrt(c/b))`: the most lives (jobs) attainable when no jobs (lives) are saved.
    pub fn intercepts(&self) -> (f64, f64) {
        ((self.c / self.a).sqrt(), (self.c / self.b).sqrt())
    }

    /// Signed constraint residual `a·lives² + b·jobs² − c`.
    pub fn residual(&self, allocation: &Allocation) -> f64 {
        self.a * allocation.lives_saved * allocation.lives_saved
            + self.b * allocation.jobs_saved * allocation.jobs_saved
            - self.c
    }

    /// `|residual| / c`.
    pub fn relative_residual(&self, allocation: &Allocation) -> f64 {
        self.residual(allocation).abs() / self.c
    }

    /// Point at angle `theta` of the parameterization `(L·cos θ, J·sin θ)`.
    pub fn point_at(&self, theta: f64) -> Allocation {
        let (lives_max, jobs_max) = self.intercepts();
        Allocation {
            lives_saved: lives_max * theta.cos(),
            jobs_saved: jobs_max * theta.sin(),
        }
    }

    /// The `index`-th of `n_points` uniformly spaced trace points.
    ///
    /// The two endpoints are the exact intercepts (`cos(π/2)` is not zero in floating point).
    pub fn trace_point(&self, index: usize, n_points: usize) -> (f64, Allocation) {
        debug_assert!(n_points >= 2 && index < n_points);
        let theta = trace_angle(index, n_points);
        let (lives_max, jobs_max) = self.intercepts();
        let point = if index == 0 {
            Allocation { lives_saved: lives_max, jobs_saved: 0.0 }
        } else if index == n_points - 1 {
            Allocation { lives_saved: 0.0, jobs_saved: jobs_max }
        } else {
            self.point_at(theta)
        };
        (theta, point)
    }

    /// Traces the frontier from the lives intercept to the jobs intercept.
    pub fn trace(&self, n_points: usize) -> Result<Vec<Allocation>> {
        Ok(self.trace_with_angles(n_points)?.into_iter().map(|(_, p)| p).collect())
    }

    /// Like [`trace`](Self::trace) but keeps the angle of every point.
    pub fn trace_with_angles(&self, n_points: usize) -> Result<Vec<(f64, Allocation)>> {
        if n_points < 2 {
            return Err(ModelError::InvalidPointCount { field: "n_points".into(), got: n_points, min: 2 });
        }
        Ok((0..n_points).map(|k| self.trace_point(k, n_points)).collect())
    }

    pub fn apply_shift(&self, shift: &ShiftSpec) -> Result<Self> {
        shift.validate()?;
        let shifted = match *shift {
            ShiftSpec::Level { factor } => Self { c: self.c * factor, ..*self },
            ShiftSpec::Proportional { factor } => Self { c: self.c * factor * factor, ..*self },
            ShiftSpec::PerAxis { lives_factor, jobs_factor } => Self {
                a: self.a / (lives_factor * lives_factor),
                b: self.b / (jobs_factor * jobs_factor),
                c: self.c,
            },
        };
        // Extreme factors can overflow or underflow the parameters.
        Self::new(shifted.a, shifted.b, shifted.c)
    }
}

/// Angle of the `index`-th of `n_points` points spanning `[0, π/2]`.
pub fn trace_angle(index: usize, n_points: usize) -> f64 {
    if index + 1 >= n_points {
        FRAC_PI_2
    } else {
        FRAC_PI_2 * index as f64 / (n_points - 1) as f64
    }
}

pub fn validate_frontier(a: f64, b: f64, c: f64) -> Result<PossibilityFrontier> {
    PossibilityFrontier::new(a, b, c)
}

/// Money per saved life and per saved job for one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Valuation {
    p_life: f64,
    p_job: f64,
}

impl Valuation {
    pub fn new(p_life: f64, p_job: f64) -> Result<Self> {
        let p_life = check_non_negative("p_life", p_life)?;
        let p_job = check_non_negative("p_job", p_job)?;
        if p_life == 0.0 && p_job == 0.0 {
            return Err(ModelError::DegenerateValuation { field: String::new() });
        }
        Ok(Self { p_life, p_job })
    }

    pub fn p_life(&self) -> f64 {
        self.p_life
    }

    pub fn p_job(&self) -> f64 {
        self.p_job
    }

    /// Monetarized benefit `p_life·lives + p_job·jobs`.
    pub fn benefit(&self, allocation: &Allocation) -> f64 {
        self.p_life * allocation.lives_saved + self.p_job * allocation.jobs_saved
    }

    /// Both prices multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.p_life * k, self.p_job * k)
    }
}

/// Lives and jobs saved, in the scenario's unit scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Allocation {
    pub lives_saved: f64,
    pub jobs_saved: f64,
}

impl Allocation {
    pub fn new(lives_saved: f64, jobs_saved: f64) -> Result<Self> {
        Ok(Self {
            lives_saved: check_non_negative("lives_saved", lives_saved)?,
            jobs_saved: check_non_negative("jobs_saved", jobs_saved)?,
        })
    }
}

/// A frontier and a valuation; `unit_scale` maps allocation units to persons
/// (e.g. `1e6` when allocations are in millions) and is used only for display.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticScenario {
    pub frontier: PossibilityFrontier,
    pub valuation: Valuation,
    pub unit_scale: f64,
}

impl StaticScenario {
    pub fn new(frontier: PossibilityFrontier, valuation: Valuation) -> Self {
        Self { frontier, valuation, unit_scale: 1.0 }
    }

    pub fn with_unit_scale(mut self, unit_scale: f64) -> Result<Self> {
        self.unit_scale = check_positive("unit_scale", unit_scale)?;
        Ok(self)
    }
}

/// Outward (factor > 1) or inward (factor < 1) frontier shifts, expressed on the intercepts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShiftSpec {
    /// `c` is multiplied by `factor`; intercepts scale by `sqrt(factor)`.
    Level { factor: f64 },
    /// Both intercepts scale by `factor`.
    Proportional { factor: f64 },
    /// Lives and jobs intercepts scale independently.
    PerAxis { lives_factor: f64, jobs_factor: f64 },
}

impl ShiftSpec {
    pub fn validate(&self) -> Result<()> {
        let check = |field: &str, value: f64| {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(ModelError::NonPositiveFactor { field: field.into(), value })
            }
        };
        match *self {
            Self::Level { factor } | Self::Proportional { factor } => check("factor", factor),
            Self::PerAxis { lives_factor, jobs_factor } => {
                check("lives_factor", lives_factor)?;
                check("jobs_factor", jobs_factor)
            }
        }
    }
}

/// A nonempty finite set of candidate allocations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet(Vec<Allocation>);

impl PointSet {
    pub fn new(points: Vec<Allocation>) -> Result<Self> {
        if points.is_empty() {
            return Err(ModelError::EmptyPointSet);
        }
        for (i, p) in points.iter().enumerate() {
            Allocation::new(p.lives_saved, p.jobs_saved).map_err(|e| e.within(&format!("[{i}]")))?;
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[Allocation] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * x.abs().max(y.abs()).max(1e-300)
    }

    #[test]
    fn validates_frontier() {
        assert!(validate_frontier(10.0, 0.1, 10.0).is_ok());
        assert_eq!(
            validate_frontier(0.0, 1.0, 1.0),
            Err(ModelError::NonPositiveParameter { field: "a".into(), value: 0.0 })
        );
        assert_eq!(
            validate_frontier(1.0, 1.0, -2.0),
            Err(ModelError::NonPositiveParameter { field: "c".into(), value: -2.0 })
        );
        assert_eq!(
            validate_frontier(1.0, f64::INFINITY, 1.0),
            Err(ModelError::NonFiniteParameter { field: "b".into() })
        );
    }

    #[test]
    fn intercepts_examples() {
        let f = validate_frontier(10.0, 0.1, 10.0).unwrap();
        let (l, j) = f.intercepts();
        assert!(close(l, 1.0, 1e-15) && close(j, 10.0, 1e-15));
        assert_eq!(validate_frontier(1.0, 1.0, 4.0).unwrap().intercepts(), (2.0, 2.0));
        let (l, j) = validate_frontier(0.2, 1.0, 1.0).unwrap().intercepts();
        assert!(close(l, 5f64.sqrt(), 1e-15));
        assert!((l - 2.2361).abs() < 1e-4);
        assert_eq!(j, 1.0);
        for p in [Allocation { lives_saved: l, jobs_saved: 0.0 }, Allocation { lives_saved: 0.0, jobs_saved: j }] {
            assert!(validate_frontier(0.2, 1.0, 1.0).unwrap().relative_residual(&p) <= 1e-15);
        }
    }

    #[test]
    fn trace_endpoints_are_exact_intercepts() {
        let f = validate_frontier(10.0, 0.1, 10.0).unwrap();
        let pts = f.trace(2).unwrap();
        assert_eq!(pts[0], Allocation { lives_saved: 1.0, jobs_saved: 0.0 });
        assert_eq!(pts[1], Allocation { lives_saved: 0.0, jobs_saved: 10.0 });
    }

    #[test]
    fn trace_quarter_circle_midpoint() {
        let f = validate_frontier(1.0, 1.0, 1.0).unwrap();
        let pts = f.trace(3).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(pts[1].lives_saved, h, 1e-15) && close(pts[1].jobs_saved, h, 1e-15));
        assert_eq!(pts[2], Allocation { lives_saved: 0.0, jobs_saved: 1.0 });
    }

    #[test]
    fn trace_five_points_third_is_diagonal() {
        use std::f64::consts::FRAC_1_SQRT_2;
        let f = validate_frontier(10.0, 0.1, 10.0).unwrap();
        let p = f.trace(5).unwrap()[2];
        assert!((p.lives_saved - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((p.jobs_saved - 10.0 * FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn trace_rejects_too_few_points() {
        let f = validate_frontier(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(f.trace(1), Err(ModelError::InvalidPointCount { got: 1, min: 2, .. })));
        assert!(matches!(f.trace(0), Err(ModelError::InvalidPointCount { .. })));
    }

    #[test]
    fn shift_examples() {
        let unit = validate_frontier(1.0, 1.0, 1.0).unwrap();
        let level = unit.apply_shift(&ShiftSpec::Level { factor: 4.0 }).unwrap();
        assert_eq!((level.a(), level.b(), level.c()), (1.0, 1.0, 4.0));
        assert_eq!(level.intercepts(), (2.0, 2.0));

        let app2 = validate_frontier(10.0, 0.1, 10.0).unwrap();
        let (l, j) = app2.apply_shift(&ShiftSpec::Proportional { factor: 2.0 }).unwrap().intercepts();
        assert!(close(l, 2.0, 1e-14) && close(j, 20.0, 1e-14));

        let per_axis = unit
            .apply_shift(&ShiftSpec::PerAxis { lives_factor: 1.0, jobs_factor: 2.0 })
            .unwrap();
        assert_eq!(per_axis.intercepts(), (1.0, 2.0));
    }

    #[test]
    fn shift_rejects_bad_factors() {
        let unit = validate_frontier(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            unit.apply_shift(&ShiftSpec::Level { factor: 0.0 }),
            Err(ModelError::NonPositiveFactor { .. })
        ));
        assert_eq!(
            unit.apply_shift(&ShiftSpec::PerAxis { lives_factor: 1.0, jobs_factor: -1.0 })
                .unwrap_err()
                .field(),
            Some("jobs_factor")
        );
    }

    #[test]
    fn valuation_rules() {
        assert!(Valuation::new(0.0, 1.0).is_ok());
        assert!(matches!(Valuation::new(0.0, 0.0), Err(ModelError::DegenerateValuation { .. })));
        assert!(matches!(Valuation::new(-1.0, 1.0), Err(ModelError::NegativeValue { .. })));
    }

    #[test]
    fn point_set_rules() {
        assert_eq!(PointSet::new(vec![]), Err(ModelError::EmptyPointSet));
        let err = PointSet::new(vec![
            Allocation { lives_saved: 0.0, jobs_saved: 1.0 },
            Allocation { lives_saved: -1.0, jobs_saved: 1.0 },
        ])
        .unwrap_err();
        assert_eq!(err.field(), Some("[1].lives_saved"));
    }
}
