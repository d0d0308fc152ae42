use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("Gamma pole in factor {index} (argument {argument})")]
    GammaPole { index: usize, argument: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("ill-conditioned linear system (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("quadrature failed: error estimate {error:e} above tolerance {tolerance:e}")]
    Quadrature { error: f64, tolerance: f64 },
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("unknown Jordan type `{0}`")]
    UnknownType(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
