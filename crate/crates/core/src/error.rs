use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Gaussian form is not normalizable: c1 = {c1}, c2 = {c2}, h = {h}")]
    NonNormalizable { c1: f64, c2: f64, h: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not symmetric")]
    Asymmetric,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix does not have the two-mode squeezing pattern (deviation {deviation:e})")]
    PatternMismatch { deviation: f64 },

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("unknown state '{0}'")]
    UnknownState(String),

    #[error("empty feasible region: {0}")]
    EmptyFeasibleRegion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
