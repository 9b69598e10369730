use thiserror::Error;

/// Errors raised by the numerical kernels and the simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms (partial sum {estimate:e})")]
    NonConvergence { terms: usize, estimate: f64 },

    #[error("degenerate hypergeometric parameters: {0}")]
    Degenerate(String),

    #[error("value overflows double precision (ln|value| = {ln_abs})")]
    Overflow { ln_abs: f64 },

    #[error("quadrature tolerance not met: estimate {estimate:e}, error bound {error_bound:e}")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("point {re} + {im}i lies on the branch cut (-inf, -1]")]
    BranchCut { re: f64, im: f64 },

    #[error(
        "(a, b, s) = ({a}, {b}, {s}) is outside the perpetuity region min(b, s) <= 1 <= 2a + b + s + bs"
    )]
    NotInElp { a: f64, b: f64, s: f64 },

    #[error("replicate {replicate} exceeded {max_events} jump events before reaching the stop level")]
    MaxEvents { replicate: u64, max_events: u64 },

    #[error("jump sampler validation failed: {0}")]
    SamplerValidation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
