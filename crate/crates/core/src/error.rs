use thiserror::Error;

use crate::laurent::LaurentError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("duplicate generator id {0:?}")]
    DuplicateId(String),
    #[error("unknown generator id {0:?}")]
    UnknownId(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("step {0} is not positive; use mixed_from_steps")]
    NonPositiveStep(i64),
    #[error("no representative for {0}")]
    NoRepresentative(String),
    #[error("illegal basis change {n} -> {n} + {l}: {reason}")]
    IllegalChange { n: String, l: String, reason: String },
    #[error("{kind} homology has rank {rank}, expected 1")]
    RankPrecondition { kind: &'static str, rank: usize },
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("invalid knot: {0}")]
    InvalidKnot(String),
    #[error("malformed pattern at offset {offset}: {msg}")]
    Pattern { offset: usize, msg: String },
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
