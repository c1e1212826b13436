use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unrecognized capture format")]
    UnrecognizedCapture,
    #[error("truncated capture at offset {0}")]
    TruncatedCapture(usize),
    #[error("unsupported link type {0}")]
    UnsupportedLinkType(u32),
    #[error("malformed capture at offset {offset}: {reason}")]
    MalformedCapture { offset: usize, reason: &'static str },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate series: zero range")]
    DegenerateSeries,
    #[error("bad header")]
    BadHeader,
    #[error("non-contiguous series at line {0}")]
    NonContiguousSeries(usize),
    #[error("bad csv row at line {line}: {reason}")]
    BadRow { line: usize, reason: String },
    #[error("numeric overflow in forward pass")]
    ForwardOverflow,
    #[error("numeric overflow in backward pass")]
    BackwardOverflow,
    #[error("training diverged at epoch {0}")]
    TrainingDiverged(usize),
    #[error("inference overflow at step {0}")]
    InferenceOverflow(usize),
    #[error("calibration failed: validation errors exceed grid maximum")]
    CalibrationFailed,
    #[error("attack leakage into normal split")]
    AttackLeakage,
    #[error("checkpoint: {0}")]
    Checkpoint(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
