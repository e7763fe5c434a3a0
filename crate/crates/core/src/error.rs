use thiserror::Error;

/// A violated configuration invariant. Only the first violation is reported.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{0} must be a finite number")]
    NotFinite(&'static str),
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("{0} must be non-negative")]
    Negative(&'static str),
    #[error("{name} exceeds {bound}")]
    ExceedsBound {
        name: &'static str,
        bound: &'static str,
    },
    #[error("core_radius must be at least 3*max(eps_x, eps_y)")]
    CoreRadiusTooSmall,
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("path needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("consecutive vertices at index {0} coincide")]
    RepeatedVertex(usize),
    #[error("closed path must end on its first vertex")]
    OpenEnds,
    #[error("negative radius r = {0}")]
    NegativeRadius(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Failure to evaluate a potential at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("point ({x}, {y}) lies on a fluxon core")]
    FluxonCore { x: f64, y: f64 },
    #[error("point x = {x} lies on the branch cut y = 0, 0 <= x <= L")]
    OnBranchCut { x: f64 },
    #[error("point ({x}, {y}) lies outside the grid domain")]
    OutsideDomain { x: f64, y: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseError {
    #[error("loop not closed")]
    NotClosed,
    #[error("loop enters fluxon core exclusion zone around ({x}, {y})")]
    CoreExclusion { x: f64, y: f64 },
    #[error("loop passes within {distance} of a core; classification ill-defined")]
    NearCore { distance: f64 },
    #[error("loop time {t} is not inside the active window with margin {margin}")]
    OutsideActiveWindow { t: f64, margin: f64 },
    #[error("invalid loop geometry: {0}")]
    Geometry(String),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaugeError {
    #[error("solver did not converge after {iterations} iterations (last residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("invalid Poisson problem: {0}")]
    InvalidProblem(String),
    #[error("Green's function evaluated at coincident points")]
    CoincidentPoints,
    #[error(transparent)]
    Field(#[from] FieldError),
}
