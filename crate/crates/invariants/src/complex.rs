//! Truncated cochain complexes and their stable cohomology.
//!
//! Each block contributes a [`ComplexPart`]: a complex of presented modules
//! over one ambient truncation, carrying relations at a fine and a coarse
//! level. Cohomology at the coarse level is read off as the stable image
//! `(Z_fine + B + rel_c) / (B + rel_c)`, which discards cycles that only exist
//! because of the truncation.

use std::collections::{BTreeMap, BTreeSet};

use rmod_core::linalg::{membership_projector, nullspace, Subquotient};
use rmod_core::{BlockModule, GaloisRing, Mat, SemiMap, Tgm};

use crate::error::Result;

/// Extra precision and depth of the fine level over the coarse one.
pub const FINE: (u32, u32) = (2, 4);

#[derive(Clone, Debug)]
pub struct Term {
    pub dim: usize,
    pub rel_fine: Mat,
    pub rel_coarse: Mat,
}

/// One block's complex, indexed by `(grading, degree)` in block coordinates.
#[derive(Clone, Debug)]
pub struct ComplexPart {
    pub label: String,
    ring: GaloisRing,
    /// `(i, j)` of the summand `B(i)[j]`.
    pub shift: (i64, i64),
    pub level: (u32, u32),
    terms: BTreeMap<(i64, i64), Term>,
    diffs: BTreeMap<(i64, i64), Mat>,
}

impl ComplexPart {
    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn term(&self, g: i64, c: i64) -> Option<&Term> {
        self.terms.get(&(g, c))
    }

    /// Differential from `(g, c)` to `(g, c + 1)`.
    pub fn diff(&self, g: i64, c: i64) -> Option<&Mat> {
        self.diffs.get(&(g, c))
    }

    pub fn cells(&self) -> Vec<(i64, i64)> {
        self.terms.keys().copied().collect()
    }

    /// Position of a block cell after the summand shift.
    pub fn place(&self, g: i64, c: i64) -> (i64, i64) {
        (g - self.shift.0, c - self.shift.1)
    }

    /// Invariant factors of the stable cohomology at `(g, c)`.
    pub fn cohomology(&self, g: i64, c: i64) -> Vec<u32> {
        let ring = &self.ring;
        let Some(t) = self.terms.get(&(g, c)) else { return Vec::new() };
        if t.dim == 0 {
            return Vec::new();
        }
        let z = match (self.terms.get(&(g, c + 1)), self.diffs.get(&(g, c))) {
            (Some(nt), Some(a)) if nt.dim > 0 => {
                let pi = membership_projector(ring, nt.dim, &nt.rel_fine);
                nullspace(ring, &pi.mul(ring, a))
            }
            _ => Mat::identity(ring, t.dim),
        };
        let den = match (self.terms.get(&(g, c - 1)), self.diffs.get(&(g, c - 1))) {
            (Some(pt), Some(b)) if pt.dim > 0 => b.hcat(&t.rel_coarse),
            _ => t.rel_coarse.clone(),
        };
        let mut e = Subquotient::new(ring, &z, &den).exps().to_vec();
        e.sort_unstable();
        e
    }

    /// Whether consecutive differentials compose to zero at the coarse level.
    pub fn is_complex(&self) -> bool {
        let ring = &self.ring;
        for (&(g, c), a) in &self.diffs {
            let (Some(b), Some(t)) = (self.diffs.get(&(g, c + 1)), self.terms.get(&(g, c + 2))) else {
                continue;
            };
            let ba = b.mul(ring, a);
            for col in ba.cols_iter() {
                if !rmod_core::linalg::in_span(ring, &t.rel_coarse, &col) {
                    return false;
                }
            }
        }
        true
    }
}

/// A finite direct sum of shifted block complexes.
#[derive(Clone, Debug, Default)]
pub struct TruncatedComplex {
    pub parts: Vec<ComplexPart>,
}

impl TruncatedComplex {
    /// Invariant factors of the cohomology per placed `(grading, degree)`.
    pub fn cohomology(&self) -> BTreeMap<(i64, i64), Vec<u32>> {
        let mut out: BTreeMap<(i64, i64), Vec<u32>> = BTreeMap::new();
        for part in &self.parts {
            for (g, c) in part.cells() {
                let e = part.cohomology(g, c);
                if !e.is_empty() {
                    let slot = out.entry(part.place(g, c)).or_default();
                    slot.extend(e);
                    slot.sort_unstable();
                }
            }
        }
        out
    }

    /// Lengths of the cohomology per placed `(grading, degree)`.
    pub fn cohomology_lengths(&self) -> BTreeMap<(i64, i64), u64> {
        self.cohomology()
            .into_iter()
            .map(|(k, e)| (k, e.iter().map(|&x| x as u64).sum()))
            .collect()
    }

    pub fn is_complex(&self) -> bool {
        self.parts.iter().all(ComplexPart::is_complex)
    }
}

pub(crate) fn vstack(cols: usize, parts: &[&Mat]) -> Mat {
    let rows = parts.iter().map(|m| m.rows()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut r0 = 0;
    for m in parts {
        if m.rows() > 0 && m.cols() > 0 {
            out.put(r0, 0, m);
        }
        r0 += m.rows();
    }
    out
}

fn rel_at(x: &Tgm, g: i64, m: u32, depth: u32) -> Mat {
    if x.dim(g) == 0 {
        Mat::zeros(0, 0)
    } else {
        x.level_rel(g, m, depth)
    }
}

fn diag2(a: &Mat, b: &Mat) -> Mat {
    match (a.rows(), b.rows()) {
        (0, _) => b.clone(),
        (_, 0) => a.clone(),
        _ => Mat::block_diag(&[a, b]),
    }
}

/// `R_k ⊗^L B` through the resolution `R(-1) -> R(-1) ⊕ R -> R`, with
/// `u(x) = (F^k x, -F^k d x)` and `v(x, y) = dV^k x + V^k y`. In grading `i`
/// the terms are `B^{i-1}`, `B^{i-1} ⊕ B^i`, `B^i` in degrees `-2, -1, 0`,
/// truncated at depths `n + 2k`, `n + k`, `n`.
pub fn block_rn_complex(block: &BlockModule, k: u32, level: (u32, u32)) -> Result<ComplexPart> {
    let (m, n) = level;
    let (mf, nf) = (m + FINE.0, n + FINE.1);
    let x = block.truncate(mf, nf + 2 * k)?;
    let ring = x.ring().clone();
    let mut gs = BTreeSet::new();
    for g in block.gradings() {
        gs.insert(g);
        gs.insert(g + 1);
    }
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &i in &gs {
        let (a, b) = (x.dim(i - 1), x.dim(i));
        if a > 0 {
            terms.insert(
                (i, -2),
                Term { dim: a, rel_fine: rel_at(&x, i - 1, mf, nf + 2 * k), rel_coarse: rel_at(&x, i - 1, m, n + 2 * k) },
            );
        }
        if a + b > 0 {
            let fine = diag2(&rel_at(&x, i - 1, mf, nf + k), &rel_at(&x, i, mf, nf + k));
            let coarse = diag2(&rel_at(&x, i - 1, m, n + k), &rel_at(&x, i, m, n + k));
            terms.insert((i, -1), Term { dim: a + b, rel_fine: fine, rel_coarse: coarse });
        }
        if b > 0 {
            terms.insert((i, 0), Term { dim: b, rel_fine: rel_at(&x, i, mf, nf), rel_coarse: rel_at(&x, i, m, n) });
        }
        if a > 0 {
            let fk = x.f_pow(i - 1, k).mat;
            let fkd = x.f_pow(i, k).after(&ring, &SemiMap::new(x.d_mat(i - 1), 0)).mat.neg(&ring);
            diffs.insert((i, -2), vstack(a, &[&fk, &fkd]));
        }
        if b > 0 && a + b > 0 {
            let dvk = x.d_mat(i - 1).mul(&ring, &x.v_pow(i - 1, k).mat);
            let vk = x.v_pow(i, k).mat;
            let v = if a > 0 { dvk.hcat(&vk) } else { vk };
            diffs.insert((i, -1), v);
        }
    }
    Ok(ComplexPart { label: block.name(), ring, shift: (0, 0), level, terms, diffs })
}

/// The block as a complex with grading `g` in degree `g` and differential `d`,
/// stored under grading key 0.
pub fn block_tot_complex(block: &BlockModule, level: (u32, u32)) -> Result<ComplexPart> {
    let (m, n) = level;
    let (mf, nf) = (m + FINE.0, n + FINE.1);
    let x = block.truncate(mf, nf)?;
    let ring = x.ring().clone();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for g in x.gradings() {
        if x.dim(g) == 0 {
            continue;
        }
        terms.insert((0, g), Term { dim: x.dim(g), rel_fine: rel_at(&x, g, mf, nf), rel_coarse: rel_at(&x, g, m, n) });
        if x.dim(g + 1) > 0 {
            diffs.insert((0, g), x.d_mat(g));
        }
    }
    Ok(ComplexPart { label: block.name(), ring, shift: (0, 0), level, terms, diffs })
}

impl ComplexPart {
    pub(crate) fn with_shift(mut self, shift: (i64, i64)) -> Self {
        self.shift = shift;
        self
    }
}
