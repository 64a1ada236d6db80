//! Exact arithmetic in truncated Witt vectors `W_m(F_{p^r})`.
//!
//! [`WittScalar`] works in Witt coordinates and is the reference model;
//! [`GaloisRing`] is the isomorphic ring `GR(p^m, r)` in polynomial
//! coordinates, used by the linear algebra in downstream crates.
//!
//! `F_{p^r}` is modelled as `F_p[x]/(f)` for a fixed irreducible `f` taken
//! from a built-in table covering `p <= 7` and `r <= 4`.

mod error;
mod galois;
mod table;
mod witt;

pub use error::WittError;
pub use galois::{GaloisRing, Gr, MAX_R};
pub use table::irreducible;
pub use witt::{FieldElt, WittScalar};

pub fn witt_add(a: &WittScalar, b: &WittScalar) -> Result<WittScalar, WittError> {
    a.add(b)
}

pub fn witt_mul(a: &WittScalar, b: &WittScalar) -> Result<WittScalar, WittError> {
    a.mul(b)
}

pub fn frobenius(a: &WittScalar) -> WittScalar {
    a.frobenius()
}

pub fn verschiebung(a: &WittScalar) -> WittScalar {
    a.verschiebung()
}

pub fn teichmuller(x: FieldElt, m: usize) -> WittScalar {
    WittScalar::teichmuller(x, m)
}

/// Least index of a nonzero coordinate; `None` stands for infinity.
pub fn valuation(a: &WittScalar) -> Option<usize> {
    a.valuation()
}
