use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension {dim} exceeds the supported bound {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("code length {n} exceeds the supported bound {max}")]
    LengthTooLarge { n: usize, max: usize },
    #[error("generator rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("code is not rate one-half: [{n}, {k}]")]
    NotRateOneHalf { n: usize, k: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("payload does not canonicalize to its key {key}")]
    KeyPayloadMismatch { key: String },
    #[error("conflicting payloads for key {key}")]
    ConflictingPayload { key: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
