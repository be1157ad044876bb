use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} exceeds 2^20")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("zero has no square class")]
    ZeroSquareClass,
    #[error("GF({0}) has no nonsquares")]
    NoNonsquare(u32),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("scale bound exceeded: {0}")]
    ScaleBound(String),
    #[error("map `{label}` does not send vertices to vertices")]
    NotVertexMap { label: String },
    #[error("map `{label}` does not preserve adjacency")]
    NotAutomorphism { label: String },
    #[error("subset is not invariant under the action (vertex {vertex} leaves it)")]
    NotInvariant { vertex: usize },
    #[error("inconsistent construction: {0}")]
    Inconsistent(String),
    #[error("algebra dimension exceeded the cap of {0}")]
    MaxDimExceeded(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
