use invariants::InvError;
use rmod_core::CoreError;
use star::StarError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BalphapError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Invariants(#[from] InvError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error("unknown extension policy {0:?} (expected \"paper-nonsplit\" or \"split\")")]
    UnknownPolicy(String),
    #[error("degree bound {0} is not certified by pipeline (rows above 2 are not computed)")]
    NotCertified(u32),
    #[error("cannot resolve {0} to a single block")]
    Unresolved(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("pipeline check failed: {0}")]
    Failed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, BalphapError>;
