use thiserror::Error;

/// Errors raised by the numerical kernels and the group machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("hypergeometric series diverges at z = 1 (eta - xi - zeta = {excess})")]
    Divergent { excess: f64 },

    #[error("series converging too slowly: partial sum {partial} after {terms} terms")]
    SlowConvergence { partial: f64, terms: usize },

    /// The adaptive rule hit its refinement limit; `value` is the best estimate reached.
    #[error("quadrature did not converge: best estimate {value} with error estimate {error}")]
    Convergence { value: f64, error: f64 },

    #[error("degenerate normalizer: sum of g is {0}")]
    DegenerateNormalizer(f64),

    #[error("group invariant violated ({check}): {detail}")]
    InvalidGroup { check: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid_group(check: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidGroup {
            check,
            detail: detail.into(),
        }
    }

    /// True for failures caused by numerical non-convergence rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::SlowConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
