use rmod_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StarError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("closed form inapplicable: {0}")]
    Inapplicable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("truncation overflow: relation closure did not settle within {0} rounds")]
    Overflow(usize),
}

pub type Result<T> = std::result::Result<T, StarError>;
