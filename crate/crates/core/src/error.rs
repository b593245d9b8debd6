use thiserror::Error;

use crate::reduced::ReducedSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A denominator vanished (1-based index of the offending term).
    #[error("inadmissible pair: zero denominator at index {index}")]
    InadmissiblePair { index: usize },

    /// Two M-interval representatives overlap without nesting.
    #[error("degenerate order: M-intervals [{}:{}] and [{}:{}] overlap without nesting", .first.0, .first.1, .second.0, .second.1)]
    DegenerateOrder { first: (i64, i64), second: (i64, i64) },

    /// The optimizer ran out of iterations; `best` carries the best iterate.
    #[error("optimizer did not reach the stationarity tolerance (residual {:.3e})", .best.residual)]
    NonConvergence { best: Box<ReducedSolution> },

    #[error("consistency violation: chain value {chain} vs non-cyclic value {noncyclic}")]
    ConsistencyViolation { chain: f64, noncyclic: f64 },

    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
