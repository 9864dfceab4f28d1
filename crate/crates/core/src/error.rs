use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero vector has no primitive normal")]
    ZeroVector,
    #[error("cap exceeded: {what} is {got}, limit {limit}")]
    CapExceeded { what: &'static str, got: usize, limit: usize },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("complex is not regular")]
    NotRegular,
    #[error("weights are not balanced around codimension-2 face {face}")]
    NotBalanced { face: usize },
    #[error("function is not convex")]
    NotConvex,
    #[error("set function is not submodular")]
    NotSubmodular,
    #[error("functions live on different complexes")]
    ComplexMismatch,
    #[error("g - h does not equal f")]
    DecompositionMismatch,
    #[error("empty list of affine components")]
    EmptyList,
    #[error("expected dimension {expected}, got {got}")]
    WrongDim { expected: usize, got: usize },
    #[error("parameters too small: r*s = {rs} < k = {k}")]
    ParamsTooSmall { rs: usize, k: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
