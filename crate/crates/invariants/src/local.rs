//! Invariants of a single block: heart, domino numbers, slopes, Hodge cells
//! and the cohomology of its totalization.

use std::collections::BTreeMap;

use rmod_core::linalg::{membership_projector, nullspace, quotient_length, Subquotient};
use rmod_core::{BlockModule, GaloisRing, Mat, SemiMap, Tgm};

use crate::complex::{block_rn_complex, block_tot_complex, vstack, FINE};
use crate::error::{InvError, Result};
use crate::newton::{newton_slopes, Q};

/// Requested truncation `(m, n)`: precision and V-depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Trunc {
    pub m: u32,
    pub n: u32,
}

impl Default for Trunc {
    fn default() -> Self {
        Trunc { m: 8, n: 16 }
    }
}

/// How far past the requested depth the search for a p-adic level goes.
const DEPTH_CAP: u32 = 512;

/// Whether `Fil^n ⊆ Fil^{n+1} + p^m`, so that `M / (Fil^n + p^m) = M / p^m`.
fn is_padic(block: &BlockModule, m: u32, n: u32) -> Result<bool> {
    let t = block.truncate(m, n + 1)?;
    for g in t.gradings() {
        for c in t.fil_gens(n, g).cols_iter() {
            if !t.is_zero_in(g, &c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn padic_depth(block: &BlockModule, m: u32, base: u32) -> Result<u32> {
    let mut n = base;
    while n < base + DEPTH_CAP {
        if is_padic(block, m, n)? {
            return Ok(n);
        }
        n += 1;
    }
    Err(InvError::Unsupported(format!("{} has no p-adic truncation below depth {}", block.name(), n)))
}

/// The level actually used for `block`: at least the requested one and the
/// block's stabilization level, and deep enough that blocks which are not
/// p-torsion are truncated p-adically (one step of slack for `F`).
pub fn working_level(block: &BlockModule, trunc: Trunc) -> Result<(u32, u32)> {
    let (sm, sn) = block.metadata().stable_at;
    let m = trunc.m.max(sm);
    let mut n = trunc.n.max(sn);
    if !block.is_p_torsion() {
        n = n.max(padic_depth(block, m, sn)? + 1);
    }
    Ok((m, n))
}

/// The level used for the stabilization cross-check.
fn next_level(block: &BlockModule, level: (u32, u32)) -> Result<(u32, u32)> {
    working_level(block, Trunc { m: level.0 + 1, n: level.1 + 1 })
}

/// Heart of one grading: `V^{-∞}Z / F^∞B`.
#[derive(Clone, Debug)]
pub struct Coeur {
    pub grading: i64,
    pub level: (u32, u32),
    /// Invariant factors over `W_m`.
    pub exps: Vec<u32>,
    /// The heart as a module over `W_m` with induced `F` and `V`, in grading 0.
    pub module: Tgm,
}

impl Coeur {
    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }
    /// Rank of the torsion-free part.
    pub fn free_rank(&self) -> u32 {
        self.exps.iter().filter(|&&e| e >= self.level.0).count() as u32
    }
    pub fn torsion(&self) -> Vec<u32> {
        self.exps.iter().copied().filter(|&e| e < self.level.0).collect()
    }
    /// Length over `k` when the heart is torsion.
    pub fn torsion_length(&self) -> u64 {
        self.torsion().iter().map(|&e| e as u64).sum()
    }
}

struct HeartData {
    x: Tgm,
    z: Mat,
    rel_c: Mat,
    sq: Subquotient,
}

fn heart_data(block: &BlockModule, g: i64, level: (u32, u32)) -> Result<HeartData> {
    let (m, n) = level;
    let (mf, nf) = (m + FINE.0, n + FINE.1);
    let x = block.truncate(mf, nf)?;
    let ring = x.ring().clone();
    let dim = x.dim(g);
    let up = x.dim(g + 1);
    // V^{-∞}Z: kernels of d V^s for all s, at the fine level
    let z = if up == 0 || dim == 0 {
        Mat::identity(&ring, dim)
    } else {
        let pi = membership_projector(&ring, up, &x.rel(g + 1));
        let v = x.v_map(g);
        let mut vs = SemiMap::new(Mat::identity(&ring, dim), 0);
        let mut rows: Vec<Mat> = Vec::new();
        for _ in 0..=nf {
            let blk = pi.mul(&ring, &x.d_mat(g).mul(&ring, &vs.mat));
            if blk.is_zero() {
                break;
            }
            rows.push(blk);
            vs = v.after(&ring, &vs);
        }
        if rows.is_empty() {
            Mat::identity(&ring, dim)
        } else {
            let refs: Vec<&Mat> = rows.iter().collect();
            nullspace(&ring, &vstack(dim, &refs))
        }
    };
    let rel_c = if dim == 0 { Mat::zeros(0, 0) } else { x.level_rel(g, m, n) };
    // F^∞B: F^s d(M^{g-1}) for all s the truncation can see
    let mut b_parts: Vec<Mat> = Vec::new();
    if x.dim(g - 1) > 0 && dim > 0 {
        let d = SemiMap::new(x.d_mat(g - 1), 0);
        for s in 0..=(nf - n) {
            b_parts.push(x.f_pow(g, s).after(&ring, &d).mat);
        }
    }
    b_parts.push(rel_c.clone());
    let den = Mat::hcat_all(dim, &b_parts.iter().collect::<Vec<_>>());
    let num = z.hcat(&rel_c);
    let sq = Subquotient::new(&ring, &num, &den);
    Ok(HeartData { x, z, rel_c, sq })
}

/// `cœur(M^g)` at the working level for `trunc`.
pub fn coeur(block: &BlockModule, g: i64, trunc: Trunc) -> Result<Coeur> {
    let level = working_level(block, trunc)?;
    coeur_at(block, g, level)
}

fn coeur_at(block: &BlockModule, g: i64, level: (u32, u32)) -> Result<Coeur> {
    let hd = heart_data(block, g, level)?;
    let ring = hd.x.ring().clone();
    let sq = &hd.sq;
    let fm = sq
        .induced(&ring, sq, |v| hd.x.apply_f(g, v))
        .ok_or(rmod_core::CoreError::NotStable("F"))?;
    let vm = sq
        .induced(&ring, sq, |v| hd.x.apply_v(g, v))
        .ok_or(rmod_core::CoreError::NotStable("V"))?;
    let rm = GaloisRing::new(ring.p(), ring.r(), level.0).map_err(rmod_core::CoreError::from)?;
    let mut module = Tgm::new(rm.clone(), level.1);
    let k = sq.num_gens();
    let mut rel = Mat::zeros(k, k);
    for (i, &e) in sq.exps().iter().enumerate() {
        rel.set(i, i, rm.p_pow(e.min(level.0)));
    }
    module.add_grading(0, (0..k).map(|i| format!("c{i}")).collect(), rel);
    module.set_f_map(0, SemiMap::new(fm.lift_into(&rm), 1));
    module.set_v_map(0, SemiMap::new(vm.lift_into(&rm), -1));
    let mut exps: Vec<u32> = sq.exps().iter().map(|&e| e.min(level.0)).collect();
    exps.sort_unstable();
    Ok(Coeur { grading: g, level, exps, module })
}

/// `T^g = dim_k M^g / (V^{-∞}Z^g + V M^g)`.
pub fn domino_number(block: &BlockModule, g: i64, trunc: Trunc) -> Result<u64> {
    let level = working_level(block, trunc)?;
    let a = domino_at(block, g, level)?;
    let hi = next_level(block, level)?;
    let b = domino_at(block, g, hi)?;
    if a != b {
        return Err(InvError::Unstable { what: format!("T^{g}({})", block.name()), lo: level, hi });
    }
    Ok(a)
}

fn domino_at(block: &BlockModule, g: i64, level: (u32, u32)) -> Result<u64> {
    let hd = heart_data(block, g, level)?;
    Ok(domino_from(&hd, g))
}

fn domino_from(hd: &HeartData, g: i64) -> u64 {
    let dim = hd.x.dim(g);
    if dim == 0 {
        return 0;
    }
    let gens = Mat::hcat_all(dim, &[&hd.z, &hd.x.v_map(g).mat, &hd.rel_c]);
    quotient_length(hd.x.ring(), dim, &gens)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeartSummary {
    pub free_rank: u32,
    pub torsion: Vec<u32>,
    /// Slopes of `F` on the heart tensored with `K`.
    pub slopes: Vec<(Q, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotCell {
    pub rank: u32,
    pub torsion: Vec<u32>,
}

/// Everything the tables need from one block, in block coordinates.
#[derive(Clone, Debug)]
pub struct BlockInvariants {
    pub level: (u32, u32),
    /// `dim H^c(R_1 ⊗^L B)^g` keyed by `(g, c)`.
    pub hodge: BTreeMap<(i64, i64), u64>,
    pub domino: BTreeMap<i64, u64>,
    pub hearts: BTreeMap<i64, HeartSummary>,
    /// Cohomology of the totalization keyed by degree (= grading).
    pub tot: BTreeMap<i64, TotCell>,
}

impl BlockInvariants {
    fn same_numbers(&self, other: &BlockInvariants) -> Option<&'static str> {
        if self.hodge != other.hodge {
            return Some("Hodge numbers");
        }
        if self.domino != other.domino {
            return Some("domino numbers");
        }
        if self.hearts != other.hearts {
            return Some("hearts");
        }
        if self.tot != other.tot {
            return Some("totalization");
        }
        None
    }
}

/// Invariants of `block`, checked to agree at the next truncation level.
pub fn block_invariants(block: &BlockModule, trunc: Trunc) -> Result<BlockInvariants> {
    let level = working_level(block, trunc)?;
    let a = block_invariants_at(block, level)?;
    let hi = next_level(block, level)?;
    let b = block_invariants_at(block, hi)?;
    if let Some(what) = a.same_numbers(&b) {
        return Err(InvError::Unstable { what: format!("{what} of {}", block.name()), lo: level, hi });
    }
    Ok(a)
}

/// Invariants at one fixed level, without the stabilization check.
pub fn block_invariants_at(block: &BlockModule, level: (u32, u32)) -> Result<BlockInvariants> {
    let r1 = block_rn_complex(block, 1, level)?;
    let mut hodge = BTreeMap::new();
    for (g, c) in r1.cells() {
        let len: u64 = r1.cohomology(g, c).iter().map(|&e| e as u64).sum();
        if len > 0 {
            hodge.insert((g, c), len);
        }
    }
    let mut domino = BTreeMap::new();
    let mut hearts = BTreeMap::new();
    for g in block.gradings() {
        let t = domino_at(block, g, level)?;
        if t > 0 {
            domino.insert(g, t);
        }
        let c = coeur_at(block, g, level)?;
        if c.is_zero() {
            continue;
        }
        let free_rank = c.free_rank();
        let torsion = c.torsion();
        let slopes = if free_rank == 0 {
            Vec::new()
        } else if !torsion.is_empty() {
            return Err(InvError::Unsupported(format!(
                "heart of {} in grading {g} mixes torsion and free parts",
                block.name()
            )));
        } else if block.r() == 1 {
            newton_slopes(&c.module, 0)?
        } else {
            let meta: Vec<(Q, u32)> = block.metadata().slopes.clone();
            let total: u32 = meta.iter().map(|s| s.1).sum();
            if total != free_rank {
                return Err(InvError::Unsupported("r > 1 without matching slope metadata".into()));
            }
            meta
        };
        hearts.insert(g, HeartSummary { free_rank, torsion, slopes });
    }
    let tot_part = block_tot_complex(block, level)?;
    let mut tot = BTreeMap::new();
    for (_, g) in tot_part.cells() {
        let e = tot_part.cohomology(0, g);
        if e.is_empty() {
            continue;
        }
        let rank = e.iter().filter(|&&x| x >= level.0).count() as u32;
        let torsion = e.into_iter().filter(|&x| x < level.0).collect();
        tot.insert(g, TotCell { rank, torsion });
    }
    Ok(BlockInvariants { level, hodge, domino, hearts, tot })
}
