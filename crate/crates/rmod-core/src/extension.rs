//! Extensions of `k(-1)[1]` by `U_{-1}`.
//!
//! `Hom(k(-1), U_{-1})` is one-dimensional, spanned by the map sending the
//! generator to `v = Σ_{e ≥ -1} σ^{-(e+1)}(λ) dV^e`. The cone of a nonzero
//! class is `U_{-1} / k v`, which is `U_0` via the generator `Σ_j V^j`; the
//! zero class gives the split object.

use std::collections::BTreeMap;

use witt_arith::{GaloisRing, Gr};

use crate::block::{make_block, BlockKind};
use crate::error::CoreError;
use crate::formal::FormalObject;
use crate::iso::find_iso;
use crate::linalg::Mat;
use crate::module::{GradedMap, Tgm};

#[derive(Clone, Debug)]
pub enum ExtensionOutcome {
    /// Nonzero class: the extension is `U_0` in degree 0.
    Cone {
        object: FormalObject,
        /// `U_{-1} / k v` at the requested truncation.
        module: Box<Tgm>,
        /// Isomorphism from the truncation of `U_0`, when one was found (`r = 1`).
        iso: Option<GradedMap>,
    },
    /// Zero class: `U_{-1} ⊕ k(-1)[1]`.
    Split { object: FormalObject },
}

impl ExtensionOutcome {
    pub fn object(&self) -> &FormalObject {
        match self {
            ExtensionOutcome::Cone { object, .. } | ExtensionOutcome::Split { object } => object,
        }
    }
}

/// The element `v` of grading 1 of a truncation of `U_{-1}`.
pub fn extension_vector(t: &Tgm, lambda: Gr) -> Vec<Gr> {
    let ring = t.ring();
    (0..t.dim(1))
        .map(|k| {
            // generator k is dV^{k-1}
            ring.sigma_pow(lambda, -(k as i64))
        })
        .collect()
}

/// Extension classified by `λ ∈ k` (only `λ mod p` matters), at truncation
/// `(ring.precision(), n)`.
pub fn cone_or_extension(ring: &GaloisRing, lambda: Gr, n: u32) -> Result<ExtensionOutcome, CoreError> {
    let (p, r) = (ring.p(), ring.r());
    let lambda = ring.reduce(lambda, 1);
    if ring.valuation(lambda) >= 1 {
        let mut object = FormalObject::of(BlockKind::Domino { t: -1 }, p, r, 0, 0)?;
        object.push(make_block(BlockKind::ResidueK, p, r)?, -1, 1)?;
        return Ok(ExtensionOutcome::Split { object });
    }
    let um1 = make_block(BlockKind::Domino { t: -1 }, p, r)?;
    let big = um1.truncate_in(ring, n + 1)?.quotient(ring.precision(), n);
    let v = extension_vector(&big, lambda);
    let num: BTreeMap<i64, Mat> =
        big.gradings().into_iter().map(|g| (g, Mat::identity(ring, big.dim(g)))).collect();
    let mut den = BTreeMap::new();
    den.insert(1, Mat::from_cols(big.dim(1), &[v]));
    let (module, _) = big.subquotient(&num, &den)?;
    let u0 = make_block(BlockKind::Domino { t: 0 }, p, r)?;
    let iso = if r == 1 { find_iso(&u0, &module) } else { None };
    Ok(ExtensionOutcome::Cone { object: FormalObject::single(u0), module: Box::new(module), iso })
}
