use thiserror::Error;

/// Errors raised by the evaluators, summation engines and verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order {requested} exceeds the cached maximum {max}")]
    OrderOverflow { requested: usize, max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("delta must exceed {bound} (got delta = {delta})")]
    Delta { bound: f64, delta: f64 },

    #[error("derivative of order {requested} requested at 0 but the kernel is only C^{smoothness} there")]
    Smoothness { requested: usize, smoothness: usize },

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("tolerance {tol:e} unachievable within {cap} terms")]
    ToleranceUnachievable { tol: f64, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("outside the integer regime: {0}")]
    Regime(String),

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("no certified bound for 1/2 < p - u < 1 (p - u = {0})")]
    Branch(f64),

    #[error("a tail envelope is required beyond the cutoff")]
    TailEnvelopeMissing,

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
