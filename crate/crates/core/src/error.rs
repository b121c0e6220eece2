use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("integrand is not finite at x = {at}")]
    NonFiniteIntegrand { at: f64 },

    /// The quadrature budget ran out. `value` is the best partial estimate.
    #[error("quadrature did not converge: value {value}, error estimate {error_estimate}")]
    NotConverged { value: f64, error_estimate: f64 },

    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("Markovianity predicate has the same value at s = {s_lo} and s = {s_hi}")]
    NoBracket { s_lo: f64, s_hi: f64 },

    #[error("degenerate evolution: the state does not move (path length {path_length})")]
    DegenerateEvolution { path_length: f64 },

    #[error("invalid qubit state: {0}")]
    InvalidState(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }
}
