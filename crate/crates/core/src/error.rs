use thiserror::Error;

/// Errors surfaced by the library. Certification failures are data, not errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("infeasible: {what} needs an estimated {estimated:.3e} removal segments, budget is {budget}")]
    Infeasible {
        what: String,
        estimated: f64,
        budget: u64,
    },

    #[error("survivor set is empty at q = {q}")]
    EmptySurvivor { q: u128 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
