//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A function argument violated a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed or inconsistent run configuration.
    #[error("config error: {0}")]
    Config(String),

    /// An iterative solver ran out of iterations.
    #[error("solver did not converge after {iterations} iterations (last residual {residual:.3e}) in {context}")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        context: String,
    },

    /// Monotone iteration blew past its growth cap: the parameter couple is
    /// outside the admissible region, or the cap is too small.
    #[error("monotone iteration exceeded growth cap after {iterations} iterations (sup u = {sup_u:.3e}, sup v = {sup_v:.3e}): outside region or cap too small")]
    GrowthCap {
        iterations: usize,
        sup_u: f64,
        sup_v: f64,
    },

    /// A cross-check that theory guarantees to pass came out false. This
    /// signals a bug, not a property of the inputs.
    #[error("cross-check inconsistency: {0}")]
    Inconsistency(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
