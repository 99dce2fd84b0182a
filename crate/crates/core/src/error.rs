use std::path::PathBuf;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid activity label {label:?}: {reason}")]
    InvalidActivity { label: String, reason: &'static str },

    #[error("trace {case_id:?} has no activities")]
    EmptyTrace { case_id: String },

    #[error("duplicate case id {0:?}")]
    DuplicateCaseId(String),

    #[error("{0}")]
    Size(String),

    #[error("invalid alignment: {0}")]
    InvalidAlignment(Violation),

    #[error("index {index} out of bounds (length {len})")]
    OutOfBounds { index: usize, len: usize },

    #[error("alignments do not share the same source log")]
    SourceMismatch,

    #[error("reference alignment has no aligned activity pairs")]
    DegenerateReference,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("no pattern has frequency above the threshold (tf_ratio = {tf_ratio}); try a lower tf_ratio")]
    ThresholdTooHigh { tf_ratio: f64 },

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
