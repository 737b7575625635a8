use thiserror::Error;

use crate::zeros::ZeroSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The base `q` lies in a regime the operation does not support.
    #[error("regime error: {0}")]
    Regime(String),

    /// An infinite product or series did not reach its tail bound.
    #[error("truncation failure: tail bound not reached after {terms} terms")]
    Truncation { terms: usize },

    #[error("series diverged: terms still growing after {terms} terms")]
    Divergence { terms: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    /// Parameters too close to an excluded value for relative checks to mean anything.
    #[error("parameter conditioning: {0}")]
    Conditioning(String),

    #[error("singular weight: |w(x)| = {magnitude:e} at the evaluation point")]
    SingularWeight { magnitude: f64 },

    #[error("quadrature nodes not distinct: min gap {gap:e}")]
    NodeDegeneracy { gap: f64 },

    /// Root finder exhausted its budget; carries the unrefined estimates.
    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        partial: Box<ZeroSet>,
    },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
}

impl Error {
    /// True for errors caused by invalid input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Regime(_)
                | Error::Domain(_)
                | Error::Parameter(_)
                | Error::Conditioning(_)
                | Error::NonFinite(_)
        )
    }
}
