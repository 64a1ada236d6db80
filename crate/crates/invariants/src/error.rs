use rmod_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InvError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("unstable: {what} changed between truncation levels {lo:?} and {hi:?}")]
    Unstable { what: String, lo: (u32, u32), hi: (u32, u32) },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precision too low: {0}")]
    Precision(String),
    #[error("non-integral Hodge-Witt number at ({i}, {j}): {value}")]
    NotIntegral { i: i64, j: i64, value: String },
}

pub type Result<T> = std::result::Result<T, InvError>;
