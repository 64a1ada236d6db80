//! Row 2 of the first page, columns 0 to 2, after discarding the `H̃^2(E^{(1)})`
//! component that every cocycle avoids.
//!
//! The remaining three-term complex splits into the subcomplex
//! `0 → E_{1/2} ⋆̂ E_{1/2} → E_{1/2} ⋆̂ E_{1/2}` (map `id ⋆̂ g^*`) and the quotient
//! `W(-1)[1] → W(-1)[1] → 0` (map `-g^* = ·(-p)`). The subcomplex is
//! `E_{1/2} ⋆̂ 𝔻(α_p)` up to shift, computed by the derived star; the quotient
//! is computed directly; the long exact sequence gives `E_2^{0,2}` and the
//! short exact sequence for `E_2^{1,2}`.

use std::collections::BTreeMap;

use invariants::{domino_numbers, Trunc};
use rmod_core::linalg::{membership_projector, nullspace};
use rmod_core::{make_block, BlockKind, FormalObject, Mat};
use serde::Serialize;
use star::{candidates, derived_star, identify, Identified};

use crate::error::{BalphapError, Result};
use crate::kunneth::{simplicial_column, KTerm};
use crate::rows::{shifted_name, FINE};

/// Level at which the subcomplex is computed through the derived star.
pub const STAR_LEVEL: (u32, u32) = (2, 6);

/// Entries of the row-2 differentials. The maps `h_E`, `h_{E^{(1)}}` are
/// never needed explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arrow {
    Zero,
    /// `c · (id ⋆̂ g^*)`.
    IdStarG(i64),
    /// `c · g^*` on `H̃^2`, which is `·p` on `W(-1)[1]`.
    G(i64),
    /// A composite through `h_E` or `h_{E^{(1)}}`.
    ThroughH,
}

/// The three-term complex `A → B → C` with its sub/quotient split.
#[derive(Clone, Debug)]
pub struct Row2Complex {
    pub terms: [Vec<KTerm>; 3],
    /// `maps[0]: A → B`, `maps[1]: B → C`, indexed `[target][source]`.
    pub maps: [Vec<Vec<Arrow>>; 2],
    /// Per term, which summands lie in the subcomplex.
    pub sub: [Vec<bool>; 3],
}

fn is_star_of_h1(t: &KTerm) -> bool {
    t.parts.len() == 2 && t.parts.iter().all(|&(_, d)| d == 1)
}

/// Builds the complex from the Künneth decomposition of columns 0, 1, 2.
pub fn row2_complex(p: u64) -> Result<Row2Complex> {
    let col = |n: usize| -> Result<Vec<KTerm>> { Ok(simplicial_column(p, n)?.remove(&2).unwrap_or_default()) };
    let (c0, c1, c2) = (col(0)?, col(1)?, col(2)?);
    // column 0: H^2(E^(1)); its only summand
    let a: Vec<KTerm> = c0;
    // column 1 without the H^2(E^(1)) component: H^1(E) * H^1(E^(1)) and H^2(E)
    let b: Vec<KTerm> = c1.into_iter().filter(|t| !t.uses(1, 2)).collect();
    // column 2: the H^1(E) * H^1(E) component
    let c: Vec<KTerm> = c2.into_iter().filter(|t| t.uses(0, 1) && t.uses(1, 1)).collect();
    if a.len() != 1 || b.len() != 2 || c.len() != 1 {
        return Err(BalphapError::Failed("unexpected Künneth terms in row 2".into()));
    }
    let b_star = b.iter().position(is_star_of_h1).ok_or_else(|| BalphapError::Failed("no star term".into()))?;
    let b_h2 = 1 - b_star;
    let mut d0 = vec![vec![Arrow::Zero; 1]; 2];
    d0[b_star][0] = Arrow::ThroughH;
    d0[b_h2][0] = Arrow::G(-1);
    let mut d1 = vec![vec![Arrow::Zero; 2]; 1];
    d1[0][b_star] = Arrow::IdStarG(1);
    d1[0][b_h2] = Arrow::ThroughH;
    let sub_b: Vec<bool> = (0..2).map(|k| k == b_star).collect();
    Ok(Row2Complex { terms: [a, b, c], maps: [d0, d1], sub: [vec![false], sub_b, vec![true]] })
}

impl Row2Complex {
    fn part(&self, k: usize, in_sub: bool) -> Vec<String> {
        let mut v: Vec<String> =
            self.terms[k].iter().zip(&self.sub[k]).filter(|(_, &s)| s == in_sub).map(|(t, _)| t.name()).collect();
        v.sort();
        v
    }

    /// Sub and quotient together give every term back.
    pub fn reassembles(&self) -> bool {
        (0..3).all(|k| {
            let mut both = self.part(k, true);
            both.extend(self.part(k, false));
            both.sort();
            let mut all: Vec<String> = self.terms[k].iter().map(KTerm::name).collect();
            all.sort();
            both == all
        })
    }

    /// No arrow leaves the subcomplex.
    pub fn sub_is_closed(&self) -> bool {
        (0..2).all(|k| {
            self.maps[k].iter().enumerate().all(|(t, row)| {
                row.iter().enumerate().all(|(s, &x)| !(self.sub[k][s] && !self.sub[k + 1][t]) || x == Arrow::Zero)
            })
        })
    }

    /// The arrows of the quotient complex.
    pub fn quotient_arrows(&self) -> Vec<Arrow> {
        self.restricted(false)
    }

    /// The arrows of the subcomplex.
    pub fn sub_arrows(&self) -> Vec<Arrow> {
        self.restricted(true)
    }

    fn restricted(&self, in_sub: bool) -> Vec<Arrow> {
        let mut out = Vec::new();
        for k in 0..2 {
            for (t, row) in self.maps[k].iter().enumerate() {
                for (s, &x) in row.iter().enumerate() {
                    if self.sub[k][s] == in_sub && self.sub[k + 1][t] == in_sub {
                        out.push(x);
                    }
                }
            }
        }
        out
    }
}

/// Why the connecting map `k(-1)[1] → U_1` vanishes.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeCertificate {
    pub source_degree: i64,
    pub target_degree: i64,
    pub vanishes: bool,
}

/// Result of the row-2 computation.
#[derive(Clone, Debug)]
pub struct Row2Ses {
    /// Cohomology of the subcomplex at `B` and `C`.
    pub sub_b: Identified,
    pub sub_c: Identified,
    /// Cohomology of the quotient at `A` and `B`, before the twist and shift.
    pub quot_a: Identified,
    pub quot_b: Identified,
    /// `U_{-1}`, the kernel of the SES.
    pub left: FormalObject,
    /// `k(-1)[1]`, the cokernel.
    pub right: FormalObject,
    pub e2_02_zero: bool,
    pub connecting: DegreeCertificate,
    /// Domino numbers of both possible middle terms, per grading.
    pub middle_dominoes: [BTreeMap<i64, u64>; 2],
}

impl Row2Ses {
    pub fn left_name(&self) -> String {
        self.left.summands().iter().map(shifted_name).collect::<Vec<_>>().join(" + ")
    }

    pub fn right_name(&self) -> String {
        self.right.summands().iter().map(shifted_name).collect::<Vec<_>>().join(" + ")
    }
}

/// `·c` on `W` at truncation `(m, n)`: kernel and cokernel.
fn scalar_on_w(p: u64, c: i64, m: u32, n: u32) -> Result<(Identified, Identified)> {
    let w = make_block(BlockKind::UnitW, p, 1)?;
    let fine = w.truncate(m + FINE.0, n + FINE.1)?;
    let coarse = fine.quotient(m, n);
    let ring = fine.ring().clone();
    let mut ker = BTreeMap::new();
    let mut num = BTreeMap::new();
    let mut img = BTreeMap::new();
    for g in fine.gradings() {
        let d = fine.dim(g);
        let phi = Mat::identity(&ring, d).scale(&ring, ring.from_int(c));
        let pi = membership_projector(&ring, d, &fine.rel(g));
        ker.insert(g, nullspace(&ring, &pi.mul(&ring, &phi)));
        num.insert(g, Mat::identity(&ring, d));
        img.insert(g, phi);
    }
    let (k, _) = coarse.subquotient(&ker, &BTreeMap::new())?;
    let (q, _) = coarse.subquotient(&num, &img)?;
    let cands = candidates(p, &[])?;
    Ok((identify(&k, &cands), identify(&q, &cands)))
}

fn expect_name(found: &Identified, want: &str, what: &str) -> Result<()> {
    if found.name().as_deref() != Some(want) {
        return Err(BalphapError::Failed(format!(
            "{what}: expected {want}, found {}",
            found.name().unwrap_or_else(|| "an unidentified module".into())
        )));
    }
    Ok(())
}

/// Computes `E_2^{0,2}` and the short exact sequence for `E_2^{1,2}`.
pub fn row2_e2(p: u64, m: u32, n: u32) -> Result<Row2Ses> {
    let cx = row2_complex(p)?;
    if !cx.reassembles() || !cx.sub_is_closed() {
        return Err(BalphapError::Failed("row-2 sub/quotient split is inconsistent".into()));
    }
    let [Arrow::G(q)] = cx.quotient_arrows()[..] else {
        return Err(BalphapError::Failed("quotient complex is not W(-1)[1] → W(-1)[1]".into()));
    };
    if cx.sub_arrows() != [Arrow::IdStarG(1)] {
        return Err(BalphapError::Failed("subcomplex is not id ⋆ g^*".into()));
    }
    // the quotient's A-term, with its twist and shift
    let a_shift = cx.terms[0][0].shift;
    let (quot_a, quot_b) = scalar_on_w(p, q * p as i64, m, n)?;
    let e = make_block(BlockKind::Dieudonne { i: 1, j: 1 }, p, 1)?;
    let dap = make_block(BlockKind::DAlphaP, p, 1)?;
    let ds = derived_star(&e, &dap, STAR_LEVEL.0, STAR_LEVEL.1)?;
    expect_name(&ds.h_minus1, "U_-1", "subcomplex cohomology at B")?;
    expect_name(&ds.h0, "U_1", "subcomplex cohomology at C")?;
    expect_name(&quot_b, "k", "quotient cohomology at B")?;
    let e2_02_zero = quot_a.is_zero();
    let left = FormalObject::of(BlockKind::Domino { t: -1 }, p, 1, 0, 0)?;
    let right = FormalObject::of(BlockKind::ResidueK, p, 1, a_shift.0, a_shift.1)?;
    // a module in degree -j maps to a module in degree 0 only through Ext^{-j}
    let connecting = DegreeCertificate { source_degree: -a_shift.1, target_degree: 0, vanishes: -a_shift.1 < 0 };
    let trunc = Trunc { m, n };
    let nonsplit = FormalObject::of(BlockKind::Domino { t: 0 }, p, 1, 0, 0)?;
    let split = left.direct_sum(&right)?;
    let per_grading = |x: &FormalObject| -> Result<BTreeMap<i64, u64>> {
        let mut out = BTreeMap::new();
        for ((i, _), v) in domino_numbers(x, trunc)? {
            *out.entry(i).or_default() += v;
        }
        Ok(out)
    };
    let middle_dominoes = [per_grading(&nonsplit)?, per_grading(&split)?];
    Ok(Row2Ses {
        sub_b: ds.h_minus1,
        sub_c: ds.h0,
        quot_a,
        quot_b,
        left,
        right,
        e2_02_zero,
        connecting,
        middle_dominoes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_consistent() {
        let cx = row2_complex(3).unwrap();
        assert!(cx.reassembles());
        assert!(cx.sub_is_closed());
        assert_eq!(cx.quotient_arrows(), vec![Arrow::G(-1)]);
        assert_eq!(cx.sub_arrows(), vec![Arrow::IdStarG(1)]);
        let names: Vec<String> = cx.terms[1].iter().map(KTerm::name).collect();
        assert!(names.contains(&"(E_{1/2} * E_{1/2})".to_string()));
        assert!(names.contains(&"W(-1)[1]".to_string()));
    }
}
