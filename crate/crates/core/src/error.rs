use thiserror::Error;

/// Errors raised by distribution evaluation, simulation and the statistics harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undefined ICC: both observations equal the mean")]
    UndefinedIcc,

    #[error("empty sample batch")]
    EmptyBatch,

    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },

    #[error("reference cdf is not monotone on the sample points (at x = {at})")]
    NonMonotoneCdf { at: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(x))
    }
}
