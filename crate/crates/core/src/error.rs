use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the library. Input errors mean a caller violated a
/// documented precondition; the remaining variants report search or solver
/// failures together with enough context to diagnose them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("no {mu}-normal perfect fractional matching: {reason}")]
    NoNormalPfm { mu: f64, reason: String },

    #[error("random walk hit a dead state after prefix {prefix:?}")]
    DeadState { prefix: Vec<usize> },

    #[error("sampling budget of {max_attempts} attempts exhausted while drawing a tight path of order {order}")]
    SamplingBudget { order: usize, max_attempts: usize },

    #[error("no tight path of order at most {max_order} connects {from:?} and {to:?}")]
    Connection {
        from: Vec<usize>,
        to: Vec<usize>,
        max_order: usize,
    },

    #[error("no spanning tight path over {pool_size} pool vertices connects {from:?} and {to:?}")]
    Spanning {
        from: Vec<usize>,
        to: Vec<usize>,
        pool_size: usize,
    },

    #[error("codegree hypothesis violated at {set:?}: degree {degree} < {threshold}")]
    Precondition {
        set: Vec<usize>,
        degree: usize,
        threshold: f64,
    },

    #[error("pipeline failed after {retries} retries: {last}")]
    Pipeline { retries: usize, last: String },

    #[error("verification failure: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
