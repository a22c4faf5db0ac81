use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("labels contain a single class; both classes are required")]
    SingleClass,

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("need at least {needed} values, got {got}")]
    TooFew { needed: usize, got: usize },

    #[error("relative delta against a zero baseline")]
    ZeroBaseline,

    #[error("intercept calibration did not converge after {steps} bisection steps (last prevalence {last})")]
    CalibrationFailed { steps: usize, last: f64 },

    #[error("malformed model dump at {location}: {reason}")]
    MalformedDump { location: String, reason: String },

    #[error("missing C0 baseline for {0}")]
    MissingBaseline(String),

    #[error("duplicate record for {0}")]
    DuplicateRecord(String),

    #[error("unknown feature name {0:?}")]
    UnknownFeature(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{} cell(s) failed; first: {first}", count)]
    CellsFailed { count: usize, first: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
