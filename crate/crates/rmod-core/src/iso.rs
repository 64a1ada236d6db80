//! Identification of truncated modules with cyclic blocks.
//!
//! Every block other than a custom finite-length one is generated by a single
//! element of grading 0, and each ambient generator of its truncation is an
//! explicit word in `F`, `V`, `d` applied to it. A candidate generator `x` of
//! the target determines a map; the `x` making it a morphism form a submodule
//! found by linear algebra (for `r = 1`), and candidates from it are tested
//! for bijectivity.

use witt_arith::Gr;

use crate::block::{BlockKind, BlockModule};
use crate::linalg::{membership_projector, nullspace, Mat};
use crate::module::{GradedMap, Tgm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    F,
    V,
    D,
}

/// Word (applied left to right) producing each ambient generator of the truncation.
fn words(block: &BlockModule, t: &Tgm) -> Option<Vec<(i64, usize, Vec<Op>)>> {
    let mut out = Vec::new();
    match block.kind() {
        BlockKind::UnitW | BlockKind::ResidueK | BlockKind::DAlphaP => out.push((0, 0, vec![])),
        BlockKind::Dieudonne { i, j } => {
            let (i, j) = (*i as usize, *j as usize);
            if j == 0 {
                out.push((0, 0, vec![]));
            } else {
                for a in 0..j {
                    out.push((0, a, vec![Op::V; a]));
                }
                for s in 1..=i {
                    out.push((0, j + s - 1, vec![Op::F; s]));
                }
            }
        }
        BlockKind::Domino { t: tt } => {
            for j in 0..t.dim(0) {
                out.push((0, j, vec![Op::V; j]));
            }
            for k in 0..t.dim(1) {
                let e = tt + k as i64;
                let w = if e >= 0 {
                    let mut w = vec![Op::V; e as usize];
                    w.push(Op::D);
                    w
                } else {
                    let mut w = vec![Op::D];
                    w.extend(std::iter::repeat_n(Op::F, (-e) as usize));
                    w
                };
                out.push((1, k, w));
            }
        }
        BlockKind::FiniteLength { .. } => return None,
    }
    Some(out)
}

/// Matrix of `x -> w(x)` from grading 0 of `t`, and the grading it lands in (`r = 1`).
fn word_matrix(t: &Tgm, w: &[Op]) -> (i64, Mat) {
    let ring = t.ring();
    let mut g = 0i64;
    let mut m = Mat::identity(ring, t.dim(0));
    for op in w {
        m = match op {
            Op::F => t.f_map(g).mat.mul(ring, &m),
            Op::V => t.v_map(g).mat.mul(ring, &m),
            Op::D => {
                let r = t.d_mat(g).mul(ring, &m);
                g += 1;
                r
            }
        };
    }
    (g, m)
}

/// An isomorphism from the truncation of `block` (at the depth and precision
/// of `target`) onto `target`, if one is found.
pub fn find_iso(block: &BlockModule, target: &Tgm) -> Option<GradedMap> {
    let ring = target.ring().clone();
    if ring.r() != 1 || block.p() != ring.p() {
        return None;
    }
    let b = block.truncate_in(&ring, target.depth()).ok()?.quotient(target.precision(), target.depth());
    let mut gs = b.gradings();
    gs.extend(target.gradings());
    gs.sort_unstable();
    gs.dedup();
    if gs.iter().any(|&g| b.length(g) != target.length(g)) {
        return None;
    }
    let ws = words(block, &b)?;
    let n0 = target.dim(0);
    if n0 == 0 {
        return None;
    }
    // word matrices indexed by (grading, ambient index) of the block
    let mut wm: std::collections::BTreeMap<(i64, usize), Mat> = Default::default();
    for (g, k, w) in &ws {
        let (g2, m) = word_matrix(target, w);
        debug_assert_eq!(g2, *g);
        wm.insert((*g, *k), m);
    }
    let phi = |g: i64, y: &[Gr]| -> Mat {
        let rows = target.dim(g);
        let mut acc = Mat::zeros(rows, n0);
        for (k, &c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some(m) = wm.get(&(g, k)) {
                acc = acc.add(&ring, &m.scale(&ring, c));
            }
        }
        acc
    };
    let one = ring.one();
    let mut cons: Vec<Mat> = Vec::new();
    for g in b.gradings() {
        let d = target.dim(g);
        let pi = membership_projector(&ring, d, &target.rel(g));
        let slack = target.rel(g).hcat(&target.fil_gens(target.depth().saturating_sub(1), g));
        let pi_f = membership_projector(&ring, d, &slack);
        let du = target.dim(g + 1);
        let pi_up = membership_projector(&ring, du, &target.rel(g + 1));
        for k in 0..b.dim(g) {
            let mut e = vec![Gr::ZERO; b.dim(g)];
            e[k] = one;
            let here = phi(g, &e);
            let f = target.f_map(g).mat.mul(&ring, &here).sub(&ring, &phi(g, &b.apply_f(g, &e)));
            cons.push(pi_f.mul(&ring, &f));
            let v = target.v_map(g).mat.mul(&ring, &here).sub(&ring, &phi(g, &b.apply_v(g, &e)));
            cons.push(pi.mul(&ring, &v));
            if du > 0 {
                let dd = target.d_mat(g).mul(&ring, &here).sub(&ring, &phi(g + 1, &b.apply_d(g, &e)));
                cons.push(pi_up.mul(&ring, &dd));
            }
        }
        for rho in b.rel(g).cols_iter() {
            cons.push(pi.mul(&ring, &phi(g, &rho)));
        }
    }
    let rows: usize = cons.iter().map(|c| c.rows()).sum();
    let mut a = Mat::zeros(rows, n0);
    let mut r0 = 0;
    for c in &cons {
        a.put(r0, 0, c);
        r0 += c.rows();
    }
    let sol = nullspace(&ring, &a);
    let mut cands: Vec<Vec<Gr>> = sol.cols_iter().collect();
    if sol.cols() > 1 {
        let mut sum = vec![Gr::ZERO; n0];
        for c in sol.cols_iter() {
            sum = crate::linalg::vec_add(&ring, &sum, &c);
        }
        cands.push(sum);
    }
    for x in cands {
        let mut map = GradedMap::default();
        for g in b.gradings() {
            let mut cols = Vec::new();
            for k in 0..b.dim(g) {
                let mut e = vec![Gr::ZERO; b.dim(g)];
                e[k] = one;
                cols.push(phi(g, &e).apply(&ring, &x));
            }
            map.mats.insert(g, Mat::from_cols(target.dim(g), &cols));
        }
        if b.is_isomorphism(target, &map) {
            return Some(map);
        }
    }
    None
}

/// First block in `candidates` isomorphic to `target`.
pub fn identify<'a>(candidates: &'a [BlockModule], target: &Tgm) -> Option<(&'a BlockModule, GradedMap)> {
    candidates.iter().find_map(|b| find_iso(b, target).map(|m| (b, m)))
}
