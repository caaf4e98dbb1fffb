use thiserror::Error;

/// Errors raised across the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty point set: {0}")]
    EmptySet(&'static str),

    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("sets E and F share {count} sample point(s), first at {first}")]
    NotDisjoint { count: usize, first: String },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("repeated sample point at index {0}")]
    RepeatedPoint(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("conversion refused: tau = {0} >= 1, degree too low")]
    DegreeTooLow(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
