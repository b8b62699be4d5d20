use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric string could not be parsed as a decimal value.
    #[error("parse error: {0}")]
    Parse(String),

    /// A parameter lies outside the domain a function is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precision or digit count outside the supported range was requested.
    #[error("precision error: {0}")]
    Precision(String),

    /// An iterative method hit its iteration cap before reaching tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
