use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("quadrature weight {index} is not positive ({weight})")]
    NonPositiveWeight { index: usize, weight: f64 },

    #[error("weights sum to {sum}, declared volume is {volume}")]
    Volume { sum: f64, volume: f64 },

    #[error("basis is not orthonormal under the rule: max |AᵀWA - I| = {deviation:e}")]
    InvalidBasis { deviation: f64 },

    #[error("point {index} lies outside the domain")]
    Domain { index: usize },

    #[error("node {index} is not a unit vector (| |x| - 1 | = {deviation:e})")]
    NotUnitVector { index: usize, deviation: f64 },

    #[error("design fails integration of degree-{degree} harmonics (residual {residual:e})")]
    DesignIntegrity { degree: usize, residual: f64 },

    #[error("problem size {size} exceeds the enumeration limit {limit}")]
    TooLarge { size: usize, limit: usize },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
