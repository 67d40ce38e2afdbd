use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid warping function: {0}")]
    InvalidWarp(String),
    #[error("invalid square-root slope function: {0}")]
    InvalidSrsf(String),
    #[error("argument outside its domain: {0}")]
    Domain(String),
    #[error("height ratios violate the shape constraints: {0}")]
    Constraint(String),
    #[error("critical structure does not match the shape: {0}")]
    Shape(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("value outside the admissible range: {0}")]
    Range(String),
    #[error("optimization failed: {0}")]
    OptimizationFailed(String),
    #[error("location outside the covariate support: {0}")]
    OutsideSupport(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
