//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("non-integral level data: {0}")]
    NonIntegralLevel(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("zero section has no valuation vector")]
    ZeroSection,
    #[error("sample point outside domain: {0}")]
    PointOutsideDomain(String),
    #[error("point is not on the boundary of the body")]
    NotOnBoundary,
    #[error("point is not contained in the body")]
    OutsideBody,
    #[error("divisor class is not big: {0}")]
    NotBig(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("subadditivity violated at {0}")]
    SubadditivityViolation(String),
    #[error("sequence orientation violated at {0}")]
    OrientationViolation(String),
    #[error("schedule leaves the relative interior of the cone at step {0}")]
    ScheduleOutsideCone(usize),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}
