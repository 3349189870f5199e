use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected n = {expected}, got n = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("(r, s) = ({r}, {s}) lies outside the admissible domain (s = 1 is only allowed at r = 0)")]
    OutsideDomain { r: f64, s: f64 },

    #[error("zero vector has no holomorphic sectional curvature")]
    ZeroVector,

    #[error("frame change matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("structure constants fail the Jacobi identities (max residual {residual:e})")]
    InvalidStructure { residual: f64 },

    #[error("no solution to the defining equation (residual {residual:e})")]
    InconsistentEquation { residual: f64 },

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error("parse error: {0}")]
    Parse(String),
}
