use thiserror::Error;

use crate::capacity::CapacityResult;

/// Errors raised by channel, capacity, exponent and list-code computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row} is not a probability distribution (sum {sum}, min entry {min})")]
    NonStochasticRow { row: usize, sum: f64, min: f64 },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("trace is not one (got {0})")]
    TraceNotOne(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("classical and quantum objects cannot be mixed")]
    VariantMismatch,

    #[error("exact evaluation needs {needed} operations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("relative entropy is infinite for input {input}")]
    InfiniteDivergence { input: usize },

    #[error("did not converge after {} iterations (gap {:e})", .0.iterations, .0.gap)]
    NotConverged(Box<CapacityResult>),

    #[error("invalid list code: {0}")]
    InvalidCode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_check(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
