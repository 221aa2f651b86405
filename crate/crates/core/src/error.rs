use thiserror::Error;

/// Errors raised by design evaluation, optimization, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("design outside the search space: {0}")]
    OutOfSpace(String),

    /// The cycle-length denominator of the cost model must stay positive;
    /// a non-positive value means the supplied cost/time parameters do not
    /// describe a workable monitoring cycle.
    #[error("cycle-length denominator is {0}; cost/time parameters are pathological")]
    PathologicalDenominator(f64),

    /// A single simulated replication ran past the step cap without a
    /// signal. Reported instead of silently truncating the run length.
    #[error("replication exceeded the {0}-step cap without signalling")]
    StepCapExceeded(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
