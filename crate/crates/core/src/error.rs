use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid conductor {0}")]
    InvalidConductor(i64),
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ring shape mismatch")]
    ShapeMismatch,
    #[error("invalid simple type {0}")]
    InvalidType(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("automorphisms do not commute")]
    NonCommuting,
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("zero element not allowed: {0}")]
    ZeroElement(&'static str),
    #[error("{0} is not semisimple")]
    NotSemisimple(&'static str),
    #[error("{0} is not central simple")]
    NotCentralSimple(&'static str),
    #[error("cochain is not antisymmetric at {0}")]
    NotAntisymmetric(String),
    #[error("normalization failed: {0}")]
    NormalizationFailed(String),
    #[error("choice dependence at {0}: cocycle is not normalized")]
    ChoiceDependence(String),
    #[error("quotient relation fails: {0}")]
    RelationFailure(String),
    #[error("degenerate window: {0}")]
    DegenerateWindow(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
