use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate segment: endpoints closer than the geometric tolerance")]
    DegenerateSegment,
    #[error("malformed rectangle: min must not exceed max on either axis")]
    MalformedRect,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("rotational speed {omega} outside [0, {max}]")]
    OutOfRange { omega: f64, max: f64 },
    #[error(
        "insufficient thrust: f_T^2 = {thrust_sq:.6} does not exceed \
         (c_f v_x)^2 + (m g)^2 = {required_sq:.6}; the vehicle cannot hold altitude while turning"
    )]
    InsufficientThrust { thrust_sq: f64, required_sq: f64 },
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvironmentError {
    #[error("point ({x}, {y}) is outside the free space")]
    PointInCollision { x: f64, y: f64 },
    #[error("invalid workspace: {0}")]
    InvalidWorkspace(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefineError {
    #[error("node reduction made no progress")]
    NoProgress,
    #[error("bezier parameter {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("samples_per_curve must be >= 2, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Environment(#[from] EnvironmentError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MissionError {
    #[error("empty input")]
    EmptyInput,
    #[error("plan is incomplete: {unreached} goal(s) unreached")]
    IncompletePlan { unreached: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
