use alloc::string::String;

use thiserror::Error;

use crate::algebra::Dims;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: Dims, right: Dims },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NoGoError {
    #[error("gradient is not integrable: {0}")]
    Integrability(String),
    #[error("bracket table has no entry for {0}")]
    MissingEntry(String),
    #[error("axiom bracket called with a mixed argument")]
    MixedAxiomArgument,
    #[error("product of two unknown-bearing quantities while expanding {0}")]
    AffineViolation(String),
    #[error("steps must be in 1..=4, got {0}")]
    InvalidSteps(usize),
    #[error("weight lifting failed for {0}")]
    Lift(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("invalid parameter {param}: {reason}")]
    InvalidParameter { param: &'static str, reason: String },
    #[error("dtau = {dtau} violates the stability bound {bound}")]
    Unstable { dtau: f64, bound: f64 },
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("matrix error: {0}")]
    Matrix(String),
}
