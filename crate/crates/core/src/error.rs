use thiserror::Error;

/// Errors raised by index construction and queries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate {index} is not finite")]
    NonFinite { index: usize },
    #[error("points must have at least one coordinate")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("base set is affinely degenerate (smallest singular value {sigma:e})")]
    DegenerateBase { sigma: f64 },
    #[error("auxiliary point lies on the lower flat (distance {distance:e})")]
    DegenerateAux { distance: f64 },
    #[error("point lies on the flat (distance {distance:e})")]
    OnFlat { distance: f64 },
    #[error("no point of the halfflat realizes the given distances (squared height {height_sq:e})")]
    NotRealizable { height_sq: f64 },
    #[error("simplex is degenerate: apex height {height:e}")]
    DegenerateSimplex { height: f64 },
    #[error("value {value} outside [0, {limit}]")]
    OutOfRange { value: f64, limit: f64 },
    #[error("cannot index an empty point set")]
    EmptySet,
    #[error("epsilon {0} outside (0, 8]")]
    InvalidEpsilon(f64),
    #[error("point at distance {distance} from the star base, expected 1")]
    NonUniformInput { distance: f64 },
    #[error("index {index} outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no star point at distance >= {radius} from the center")]
    EmptySlice { radius: f64 },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("{structures} structures exceed the budget of {budget}")]
    InstanceTooLarge { structures: u64, budget: u64 },
    #[error("k = {k} outside {min}..={max}")]
    InvalidK { k: usize, min: usize, max: usize },
    #[error("query projection is not interior to the base simplex")]
    QueryOutsidePrism,
    #[error("points are not vertically aligned in canonical coordinates")]
    NotVerticallyAligned,
    #[error("point coincides with the query")]
    CoincidentWithQuery,
    #[error("expected points in R^4, got R^{0}")]
    DimensionNot4(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
