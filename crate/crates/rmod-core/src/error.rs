use thiserror::Error;
use witt_arith::WittError;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error("Dieudonne block needs i >= 1 and gcd(i, j) = 1, got ({i}, {j})")]
    NotCoprime { i: u32, j: u32 },
    #[error("invalid finite-length block: {0}")]
    BadFiniteLength(String),
    #[error("filtration index {s} out of range 0..={n}")]
    FiltrationRange { s: u32, n: u32 },
    #[error("parameter mismatch: {0}")]
    Mismatch(String),
    #[error("submodule is not stable under {0}")]
    NotStable(&'static str),
    #[error("unstable: {0}")]
    Unstable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bad module spec: {0}")]
    Spec(String),
}
