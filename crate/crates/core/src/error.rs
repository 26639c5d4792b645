use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("{what} is outside the domain of the formula (value {value})")]
    OutOfDomain { what: &'static str, value: f64 },
    #[error("quadrature did not converge: estimated error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("root finding did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("no phase transition: {0}")]
    NoTransition(&'static str),
    #[error("phase labels agree at both ends of the bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("integral diverges: {0}")]
    Divergent(&'static str),
    #[error("no simple graph found after {attempts} attempts")]
    Infeasible { attempts: usize },
}

impl Error {
    /// Short machine-readable tag, used in the error column of sweep output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::OutOfDomain { .. } => "out_of_domain",
            Error::Quadrature { .. } => "quadrature",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NoTransition(_) => "no_transition",
            Error::NoBracket { .. } => "no_bracket",
            Error::Divergent(_) => "divergent",
            Error::Infeasible { .. } => "infeasible",
        }
    }

    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
