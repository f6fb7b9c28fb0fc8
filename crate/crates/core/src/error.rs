use thiserror::Error;

/// Errors raised by the decomposition library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("period must be at least 1")]
    ZeroPeriod,

    #[error("value must be at least 1, got 0")]
    ZeroArgument,

    #[error("period {period} exceeds signal length {len}")]
    PeriodExceedsLength { period: usize, len: usize },

    #[error("period {period} exceeds the basis limit {limit}")]
    PeriodTooLarge { period: usize, limit: usize },

    #[error("signal must contain at least one sample")]
    EmptySignal,

    #[error("sample {index} is not finite ({value})")]
    NonFiniteSample { index: usize, value: f64 },

    #[error("signal has zero energy")]
    ZeroEnergy,

    #[error("histograms have different maximum periods ({left} vs {right})")]
    MismatchedPeriods { left: usize, right: usize },

    #[error("histogram has zero norm")]
    ZeroNormHistogram,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
