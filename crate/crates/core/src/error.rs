use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("query point {0} is not strictly inside the domain")]
    OutsideDomain(String),
    #[error("query lies beyond the focal distance (1 - s*kappa = {0})")]
    FocalSingularity(f64),
    #[error("ray resolution error: {0}")]
    Resolution(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("points are not equidistant: |x-y1| = {0}, |x-y2| = {1}")]
    Equidistance(f64, f64),
    #[error("argument outside its domain: {0}")]
    Domain(String),
    #[error("insufficient data: {got} samples, need at least {need}")]
    InsufficientData { got: usize, need: usize },
    #[error("missing path channel `{0}`")]
    MissingChannel(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("parse error: {0}")]
    Parse(String),
}
