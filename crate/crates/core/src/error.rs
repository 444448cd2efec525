use thiserror::Error;

/// Domain errors raised by model construction, the solvers and the analysis layer.
///
/// Variants that concern a single input carry the name of that input in `field`.
/// Callers that know where the value came from (a scenario file, a request body)
/// qualify it with [`ModelError::within`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("`{field}` must be strictly positive, got {value}")]
    NonPositiveParameter { field: String, value: f64 },
    #[error("`{field}` must be finite")]
    NonFiniteParameter { field: String },
    #[error("`{field}` must be non-negative, got {value}")]
    NegativeValue { field: String, value: f64 },
    #[error("`{field}`: at least one of the paired prices must be positive")]
    DegenerateValuation { field: String },
    #[error("`{field}` must be greater than -1, got {value}")]
    InvalidDiscountRate { field: String, value: f64 },
    #[error("`{field}` must be strictly positive, got {value}")]
    NonPositiveFactor { field: String, value: f64 },
    #[error("`{field}` requires at least {min} points, got {got}")]
    InvalidPointCount { field: String, got: usize, min: usize },
    #[error("the job price is zero, the optimality ratio is undefined")]
    ZeroJobPrice,
    #[error("`{field}` is zero, the optimality ratio is undefined")]
    ZeroPrice { field: String },
    #[error("the point set is empty")]
    EmptyPointSet,
    #[error("`{field}` must not be empty")]
    EmptyCollection { field: String },
    #[error("`{field}`: {variable} appears in more than one constraint")]
    OverlappingVariables { field: String, variable: String },
    #[error("`{field}`: period {period} is outside the horizon 1..={horizon}")]
    InvalidPeriod { field: String, period: usize, horizon: usize },
    #[error("unknown parameter `{0}` (expected one of a, b, c, p_life, p_job)")]
    InvalidParameterName(String),
    #[error("relative step {0} is outside (0, 0.1]")]
    StepOutOfRange(f64),
    #[error("perturbing `{field}` by {step} leaves the valid domain")]
    PerturbationOutOfDomain { field: String, step: f64 },
    #[error("observation must be strictly interior, got lives={lives}, jobs={jobs}")]
    CornerObservation { lives: f64, jobs: f64 },
    #[error("observation is off the frontier (relative constraint residual {residual:e})")]
    OffFrontierObservation { residual: f64 },
}

impl ModelError {
    /// Stable machine-readable code, used on the wire.
    pub fn code(&self) -> &'static str {
        match self {
            Self::NonPositiveParameter { .. } => "NON_POSITIVE_PARAMETER",
            Self::NonFiniteParameter { .. } => "NON_FINITE_PARAMETER",
            Self::NegativeValue { .. } => "NEGATIVE_VALUE",
            Self::DegenerateValuation { .. } => "DEGENERATE_VALUATION",
            Self::InvalidDiscountRate { .. } => "INVALID_DISCOUNT_RATE",
            Self::NonPositiveFactor { .. } => "NON_POSITIVE_FACTOR",
            Self::InvalidPointCount { .. } => "INVALID_POINT_COUNT",
            Self::ZeroJobPrice => "ZERO_JOB_PRICE",
            Self::ZeroPrice { .. } => "ZERO_PRICE",
            Self::EmptyPointSet => "EMPTY_POINT_SET",
            Self::EmptyCollection { .. } => "EMPTY_COLLECTION",
            Self::OverlappingVariables { .. } => "OVERLAPPING_VARIABLES",
            Self::InvalidPeriod { .. } => "INVALID_PERIOD",
            Self::InvalidParameterName(_) => "INVALID_PARAMETER_NAME",
            Self::StepOutOfRange(_) => "STEP_OUT_OF_RANGE",
            Self::PerturbationOutOfDomain { .. } => "PERTURBATION_OUT_OF_DOMAIN",
            Self::CornerObservation { .. } => "CORNER_OBSERVATION",
            Self::OffFrontierObservation { .. } => "OFF_FRONTIER_OBSERVATION",
        }
    }

    /// The offending input, if the error concerns one.
    pub fn field(&self) -> Option<&str> {
        match self {
            Self::NonPositiveParameter { field, .. }
            | Self::NonFiniteParameter { field }
            | Self::NegativeValue { field, .. }
            | Self::DegenerateValuation { field }
            | Self::InvalidDiscountRate { field, .. }
            | Self::NonPositiveFactor { field, .. }
            | Self::InvalidPointCount { field, .. }
            | Self::ZeroPrice { field }
            | Self::EmptyCollection { field }
            | Self::OverlappingVariables { field, .. }
            | Self::InvalidPeriod { field, .. }
            | Self::PerturbationOutOfDomain { field, .. } => Some(field),
            _ => None,
        }
    }

    /// Prefixes the field path, e.g. `a` within `frontier` becomes `frontier.a`.
    pub fn within(mut self, prefix: &str) -> Self {
        if prefix.is_empty() {
            return self;
        }
        match &mut self {
            Self::NonPositiveParameter { field, .. }
            | Self::NonFiniteParameter { field }
            | Self::NegativeValue { field, .. }
            | Self::DegenerateValuation { field }
            | Self::InvalidDiscountRate { field, .. }
            | Self::NonPositiveFactor { field, .. }
            | Self::InvalidPointCount { field, .. }
            | Self::ZeroPrice { field }
            | Self::EmptyCollection { field }
            | Self::OverlappingVariables { field, .. }
            | Self::InvalidPeriod { field, .. }
            | Self::PerturbationOutOfDomain { field, .. } => {
                *field = if field.is_empty() {
                    prefix.to_string()
                } else if field.starts_with('[') {
                    format!("{prefix}{field}")
                } else {
                    format!("{prefix}.{field}")
                };
            }
            _ => {}
        }
        self
    }
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

pub(crate) fn check_positive(field: &str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(ModelError::NonFiniteParameter { field: field.into() });
    }
    if value <= 0.0 {
        return Err(ModelError::NonPositiveParameter { field: field.into(), value });
    }
    Ok(value)
}

pub(crate) fn check_non_negative(field: &str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(ModelError::NonFiniteParameter { field: field.into() });
    }
    if value < 0.0 {
        return Err(ModelError::NegativeValue { field: field.into(), value });
    }
    Ok(value)
}
