use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedDocument(String),

    #[error("index {index:?} out of range for dims {dims:?}")]
    IndexOutOfRange { index: Vec<usize>, dims: Vec<usize> },

    #[error("state has no nonzero amplitude")]
    ZeroState,

    #[error("qudit dimension {dim} at position {position} is below 2")]
    DimTooSmall { position: usize, dim: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("scale factor is zero")]
    ZeroScalar,

    #[error("cut size l={l} invalid for {n} qudits")]
    BadL { n: usize, l: usize },

    #[error("exact backend requested for numeric entries")]
    KindMismatch,

    #[error("matrix has no entries")]
    EmptyMatrix,

    #[error("matrix has rank {rank}, not 1")]
    NotRankOne { rank: usize },

    #[error("row block {block:?} is not a proper nonempty subset of {n} qudits")]
    BadBlock { block: Vec<usize>, n: usize },

    #[error("expected a 2x2x2xd system, got dims {0:?}")]
    WrongSystem(Vec<usize>),

    #[error("operator dimension mismatch at qudit {position}: operator {op_dim}, qudit {qudit_dim}")]
    DimMismatch {
        position: usize,
        op_dim: usize,
        qudit_dim: usize,
    },

    #[error("operator is not invertible")]
    NotInvertible,

    #[error("unknown system {0:?}")]
    UnknownSystem(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code, used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedDocument(_) => "MALFORMED_DOCUMENT",
            Error::IndexOutOfRange { .. } => "INDEX_OUT_OF_RANGE",
            Error::ZeroState => "ZERO_STATE",
            Error::DimTooSmall { .. } => "DIM_TOO_SMALL",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::ZeroScalar => "ZERO_SCALAR",
            Error::BadL { .. } => "BAD_L",
            Error::KindMismatch => "KIND_MISMATCH",
            Error::EmptyMatrix => "EMPTY_MATRIX",
            Error::NotRankOne { .. } => "NOT_RANK_ONE",
            Error::BadBlock { .. } => "BAD_BLOCK",
            Error::WrongSystem(_) => "WRONG_SYSTEM",
            Error::DimMismatch { .. } => "DIM_MISMATCH",
            Error::NotInvertible => "NOT_INVERTIBLE",
            Error::UnknownSystem(_) => "UNKNOWN_SYSTEM",
            Error::UnknownEntry(_) => "UNKNOWN_ENTRY",
            Error::Io { .. } => "IO",
            Error::Internal(_) => "INTERNAL",
        }
    }

    /// True for errors caused by bad user input (documents, paths, ids).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::MalformedDocument(_)
                | Error::IndexOutOfRange { .. }
                | Error::ZeroState
                | Error::DimTooSmall { .. }
                | Error::UnknownSystem(_)
                | Error::UnknownEntry(_)
                | Error::Io { .. }
        )
    }
}
