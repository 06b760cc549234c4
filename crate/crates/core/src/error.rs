use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sample contains a non-finite value at component {0}")]
    NonFinite(usize),
    #[error("no samples observed yet")]
    Empty,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown averager `{0}`")]
    UnknownAverager(String),
    #[error("variance target unattainable: {n_old} + {n_recent} samples < window {window}")]
    Unattainable {
        n_old: u64,
        n_recent: u64,
        window: u64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
