use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported rotation order m = {0} (expected one of 2, 3, 4, 6)")]
    UnsupportedOrder(u32),

    #[error("elements belong to different semidirect products (m = {left} vs m = {right})")]
    ContextMismatch { left: u32, right: u32 },

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("matrix shapes do not compose: {0}")]
    Shape(String),

    #[error("composite of the two maps is not zero")]
    NotAComplex,

    #[error("negative degree {0}")]
    NegativeDegree(i64),

    #[error("degree n = {n} for m = {m} is outside the range covered by the known computation")]
    NotCovered { m: u32, n: i64 },

    #[error("missing Whitehead group in degree {0}")]
    MissingDegree(i64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
