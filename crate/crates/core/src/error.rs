use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum DarimaError {
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid partition: K={k} must lie in 1..={t}")]
    InvalidPartition { t: usize, k: usize },

    #[error("slice bounds ({lbound}, {ubound}) out of range for series of length {len}")]
    SliceOutOfRange {
        lbound: usize,
        ubound: usize,
        len: usize,
    },

    #[error("split horizon {horizon} must lie in 1..{len}")]
    InvalidSplit { horizon: usize, len: usize },

    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("model fit failed: {0}")]
    FitFailed(String),

    #[error("{part} polynomial has a root inside or on the unit circle")]
    RootsInsideUnitCircle { part: &'static str },

    #[error("cannot combine local estimators: {0}")]
    CombineMismatch(String),

    #[error("history too short for the AR order: need {needed}, got {got}")]
    InsufficientHistory { needed: usize, got: usize },

    #[error("covariate values missing for global indices {needed_from}..={needed_to}")]
    MissingCovariates { needed_from: i64, needed_to: i64 },

    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error("csv column {0:?} not found in header")]
    MissingColumn(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("wire protocol error: {0}")]
    Protocol(String),

    #[error("worker task k={k} failed: {detail}")]
    WorkerFailure { k: usize, detail: String },

    #[error("job failed: {0}")]
    JobFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, DarimaError>;
