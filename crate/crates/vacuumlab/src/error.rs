use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("delta families belong to different equivalence classes (delta(0) = {0} vs {1})")]
    IncompatibleClasses(f64, f64),
    #[error("composed delta has a singular root at k = {0}")]
    SingularRoot(f64),
    #[error("degenerate mode: {0}")]
    DegenerateMode(String),
    #[error("complex kernel returned a non-conjugate pair (mismatch {0:e})")]
    Branch(f64),
    #[error("no sign change on [{0}, {1}]")]
    NoSignChange(f64, f64),
    #[error("representation dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("coefficient extraction too large: {0}")]
    CombinatorialCap(String),
    #[error("operation not supported for this family: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
