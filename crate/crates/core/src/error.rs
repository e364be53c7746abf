use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("{function}: argument outside supported domain ({reason})")]
    Domain {
        function: &'static str,
        reason: &'static str,
    },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature did not converge: estimate {value}, achieved error {achieved_error} after {panels} panels")]
    QuadratureNonConvergence {
        value: f64,
        achieved_error: f64,
        panels: usize,
    },

    #[error("integrand returned NaN at {at}")]
    NanIntegrand { at: f64 },

    #[error("series for {function} did not converge in {terms} terms")]
    SeriesNonConvergence { function: &'static str, terms: usize },

    #[error("closed form unavailable for s = {s}: within {band} of a removable singularity")]
    PoleAdjacent { s: f64, band: f64 },

    #[error("objective is flat (max rate {max_rate:e}); no information in the bracket")]
    FlatObjective { max_rate: f64 },

    #[error("eigenvalue gap {gap:e} below degeneracy tolerance")]
    Degenerate { gap: f64 },

    #[error("gauge optimisation did not converge: best value {best}, duality gap {gap:e}")]
    OptimizerNonConvergence { best: f64, gap: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
