//! Hom spaces between formal objects concentrated in one cohomological degree.
//!
//! A morphism is a grading-wise matrix `X` on ambient generators commuting
//! with `F`, `V`, `d` and preserving relations. Solutions are computed at a
//! fine truncation and pushed to the coarse one, which removes maps that only
//! exist because of the truncation.

use std::collections::BTreeMap;

use witt_arith::Gr;

use crate::block::BlockModule;
use crate::error::CoreError;
use crate::formal::FormalObject;
use crate::linalg::{membership_projector, nullspace, Mat, Subquotient};

/// Extra depth and precision used for the fine truncation.
const SLACK: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    /// Rank over `Z_p` (exponents that keep growing with the precision).
    pub rank: usize,
    /// Exponents of the finite part.
    pub torsion: Vec<u32>,
    /// Whether rank and torsion agree at the next truncation level.
    pub stable: bool,
    /// Truncation `(m, n)` the result was read off at.
    pub level: (u32, u32),
}

impl HomSpace {
    /// Length of the torsion part over `k`.
    pub fn torsion_length(&self) -> u64 {
        self.torsion.iter().map(|&e| e as u64).sum()
    }

    /// Dimension over `k` when the space is a `k`-vector space.
    pub fn dim_k(&self) -> Option<u64> {
        (self.rank == 0 && self.torsion.iter().all(|&e| e == 1)).then_some(self.torsion.len() as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// `Hom(M, N)` at truncation `(m, n)`, checked against `(m + 1, n + 1)`.
pub fn hom_space(src: &FormalObject, tgt: &FormalObject, trunc: (u32, u32)) -> Result<HomSpace, CoreError> {
    if src.r() != 1 || tgt.r() != 1 {
        return Err(CoreError::Unsupported("hom spaces are computed for r = 1 only".into()));
    }
    if src.p() != tgt.p() && !src.is_empty() && !tgt.is_empty() {
        return Err(CoreError::Mismatch("different primes".into()));
    }
    let (ds, dt) = (src.degrees(), tgt.degrees());
    if ds.len() > 1 || dt.len() > 1 {
        return Err(CoreError::Unsupported("objects must be concentrated in one cohomological degree".into()));
    }
    if let (Some(a), Some(b)) = (ds.first(), dt.first()) {
        if a != b {
            return Err(CoreError::Unsupported(format!(
                "source in degree {a} and target in degree {b}: that is an Ext group"
            )));
        }
    }
    let (m, n) = trunc;
    let levels = [(m, n), (m + 1, n + 1), (m + 2, n + 2)];
    let mut exps: Vec<Vec<u32>> = vec![Vec::new(); 3];
    for a in src.summands() {
        for b in tgt.summands() {
            let s = b.shift.0 - a.shift.0;
            for (k, &(mc, nc)) in levels.iter().enumerate() {
                exps[k].extend(block_hom_exps(&a.block, &b.block, s, mc, nc)?);
            }
        }
    }
    for e in exps.iter_mut() {
        e.sort_unstable();
    }
    let split = |lo: &[u32], hi: &[u32]| -> Option<(usize, Vec<u32>)> {
        if lo.len() != hi.len() {
            return None;
        }
        let mut rank = 0;
        let mut tors = Vec::new();
        for (&x, &y) in lo.iter().zip(hi) {
            if x == y {
                tors.push(x);
            } else {
                rank += 1;
            }
        }
        Some((rank, tors))
    };
    let first = split(&exps[0], &exps[1]);
    let second = split(&exps[1], &exps[2]);
    let stable = first.is_some() && first == second;
    let (rank, torsion) = first.unwrap_or((0, exps[0].clone()));
    Ok(HomSpace { rank, torsion, stable, level: (m, n) })
}

/// Exponents of `Hom(B1, B2(s))` at coarse level `(mc, nc)`.
fn block_hom_exps(b1: &BlockModule, b2: &BlockModule, s: i64, mc: u32, nc: u32) -> Result<Vec<u32>, CoreError> {
    let (mf, nf) = (mc + SLACK, nc + SLACK);
    let t1 = b1.truncate(mf, nf)?;
    let t2 = b2.truncate(mf, nf)?.twist(s);
    let ring = t1.ring().clone();
    let gs: Vec<i64> = t1.gradings().into_iter().filter(|&h| t1.dim(h) > 0 && t2.dim(h) > 0).collect();
    if gs.is_empty() {
        return Ok(Vec::new());
    }
    let mut offset = BTreeMap::new();
    let mut total = 0usize;
    for &h in &gs {
        offset.insert(h, total);
        total += t2.dim(h) * t1.dim(h);
    }
    // a term L * X_h * y contributes L[:, a] * y[b] to unknown (h, a, b)
    let term = |rows: usize, h: i64, l: &Mat, y: &[Gr], coef: Gr, out: &mut Mat| {
        let Some(&off) = offset.get(&h) else { return };
        let r2 = t2.dim(h);
        for (b, &yb) in y.iter().enumerate() {
            if yb.is_zero() {
                continue;
            }
            let c = ring.mul(yb, coef);
            for a in 0..r2 {
                let u = off + b * r2 + a;
                for i in 0..rows {
                    let x = l.get(i, a);
                    if !x.is_zero() {
                        out.set(i, u, ring.add(out.get(i, u), ring.mul(x, c)));
                    }
                }
            }
        }
    };
    let one = ring.one();
    let neg = ring.neg(one);
    let mut blocks: Vec<Mat> = Vec::new();
    let mut push = |rows: usize, pi: &Mat, m: Mat| {
        debug_assert_eq!(m.rows(), rows);
        blocks.push(pi.mul(&ring, &m));
    };
    for &h in &gs {
        let (d1, d2) = (t1.dim(h), t2.dim(h));
        let id2 = Mat::identity(&ring, d2);
        let pi = membership_projector(&ring, d2, &t2.rel(h));
        let slack = t2.rel(h).hcat(&t2.fil_gens(nf - 1, h));
        let pi_f = membership_projector(&ring, d2, &slack);
        let d2_up = t2.dim(h + 1);
        let pi_up = membership_projector(&ring, d2_up, &t2.rel(h + 1));
        for k in 0..d1 {
            let mut e = vec![Gr::ZERO; d1];
            e[k] = one;
            let mut c = Mat::zeros(d2, total);
            term(d2, h, &t2.f_map(h).mat, &e, one, &mut c);
            term(d2, h, &id2, &t1.apply_f(h, &e), neg, &mut c);
            push(d2, &pi_f, c);
            let mut c = Mat::zeros(d2, total);
            term(d2, h, &t2.v_map(h).mat, &e, one, &mut c);
            term(d2, h, &id2, &t1.apply_v(h, &e), neg, &mut c);
            push(d2, &pi, c);
            if d2_up > 0 {
                let mut c = Mat::zeros(d2_up, total);
                term(d2_up, h, &t2.d_mat(h), &e, one, &mut c);
                if t1.dim(h + 1) > 0 {
                    term(d2_up, h + 1, &Mat::identity(&ring, d2_up), &t1.apply_d(h, &e), neg, &mut c);
                }
                push(d2_up, &pi_up, c);
            }
        }
        for rho in t1.rel(h).cols_iter() {
            let mut c = Mat::zeros(d2, total);
            term(d2, h, &id2, &rho, one, &mut c);
            push(d2, &pi, c);
        }
    }
    let rows: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut a = Mat::zeros(rows, total);
    let mut r0 = 0;
    for b in &blocks {
        a.put(r0, 0, b);
        r0 += b.rows();
    }
    let sol = nullspace(&ring, &a);
    // maps landing in the coarse relations are zero
    let mut triv: Vec<Vec<Gr>> = Vec::new();
    for &h in &gs {
        let (d1, d2) = (t1.dim(h), t2.dim(h));
        let off = offset[&h];
        let rel_c = t2.level_rel(h, mc, nc);
        for b in 0..d1 {
            for rho in rel_c.cols_iter() {
                let mut v = vec![Gr::ZERO; total];
                for (a_, &x) in rho.iter().enumerate() {
                    v[off + b * d2 + a_] = x;
                }
                triv.push(v);
            }
        }
    }
    let triv = Mat::from_cols(total, &triv);
    let sq = Subquotient::new(&ring, &sol, &triv);
    Ok(sq.exps().to_vec())
}
