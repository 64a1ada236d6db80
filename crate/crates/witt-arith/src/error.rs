use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("unsupported prime {0}; expected one of 2, 3, 5, 7")]
    UnsupportedPrime(u64),
    #[error("unsupported residue degree {0}; expected 1..=4")]
    UnsupportedDegree(usize),
    #[error("precision {0} out of range")]
    Precision(u32),
    #[error("incompatible Witt parameters")]
    Incompatible,
    #[error("coordinate out of range for F_{p}^{r}")]
    BadCoordinate { p: u64, r: usize },
}
