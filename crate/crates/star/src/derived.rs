//! `E ⋆̂ N` for a Dieudonne block `E = E_{j/(i+j)}`, through the resolution
//! `0 -> ℛ̂ -> ℛ̂ -> E -> 0` whose first map is right multiplication by
//! `F^i - V^j`.
//!
//! Both copies of `ℛ̂ ⋆ N` are band models at a fine level. The target has
//! `i` more F-bands than the source, so the map is computed without loss.
//! `H^{-1}` is the stable image of the fine kernel in the coarse truncation;
//! `H^0` is the image of the low F-bands in the cokernel, which discards the
//! bands near the cut that only survive because of it.

use std::collections::BTreeMap;

use rmod_core::linalg::{in_span, membership_projector, nullspace};
use rmod_core::{find_iso, make_block, BlockKind, BlockModule, GaloisRing, Gr, Mat, Tgm};
use serde::Serialize;

use crate::bands::{band_model, Band, BandModel};
use crate::error::{Result, StarError};

/// Extra precision and depth of the fine level.
pub const FINE: (u32, u32) = (2, 4);

/// A cohomology module together with the block it was matched to.
#[derive(Clone, Debug)]
pub struct Identified {
    pub module: Tgm,
    /// Block name and the V-depth at which the match was found.
    pub block: Option<(String, u32)>,
}

impl Identified {
    pub fn is_zero(&self) -> bool {
        self.module.total_length() == 0
    }

    pub fn status(&self) -> &'static str {
        if self.is_zero() || self.block.is_some() {
            "identified"
        } else {
            "unidentified"
        }
    }

    pub fn name(&self) -> Option<String> {
        if self.is_zero() {
            Some("0".into())
        } else {
            self.block.as_ref().map(|b| b.0.clone())
        }
    }
}

/// Which bands of the source meet the kernel, per grading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelBands {
    pub grading: i64,
    pub family: &'static str,
    pub indices: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct DerivedStar {
    pub level: (u32, u32),
    pub h_minus1: Identified,
    pub h0: Identified,
    pub kernel_bands: Vec<KernelBands>,
}

/// Blocks tried when naming a cohomology module.
pub fn candidates(p: u64, extra: &[BlockModule]) -> Result<Vec<BlockModule>> {
    let mut out = Vec::new();
    for t in -3..=3 {
        out.push(make_block(BlockKind::Domino { t }, p, 1)?);
    }
    for kind in [BlockKind::UnitW, BlockKind::ResidueK, BlockKind::DAlphaP, BlockKind::Dieudonne { i: 1, j: 1 }] {
        out.push(make_block(kind, p, 1)?);
    }
    out.extend(extra.iter().cloned());
    Ok(out)
}

/// Matches `h` against the candidates at its own depth, then one step
/// shallower when that loses nothing.
pub fn identify(h: &Tgm, cands: &[BlockModule]) -> Identified {
    if h.total_length() == 0 {
        return Identified { module: h.clone(), block: None };
    }
    let depth = h.depth();
    for c in cands {
        if find_iso(c, h).is_some() {
            return Identified { module: h.clone(), block: Some((c.name(), depth)) };
        }
    }
    if depth > 1 {
        let shallow = h.quotient(h.precision(), depth - 1);
        if shallow.total_length() == h.total_length() {
            for c in cands {
                if find_iso(c, &shallow).is_some() {
                    return Identified { module: shallow, block: Some((c.name(), depth - 1)) };
                }
            }
        }
    }
    Identified { module: h.clone(), block: None }
}

/// `x ↦ x · (F^i - V^j)` from `src` into `dst`, on the generator `(band, a)`
/// of grading `g`.
fn phi_gen(src: &BandModel, dst: &BandModel, ij: (u32, u32), g: i64, band: Band, a: usize) -> Vec<Gr> {
    let (i, j) = ij;
    let ring = dst.ring().clone();
    let one = ring.one();
    let neg = ring.neg(one);
    let base = &src.base;
    let gx = if band.is_d() { g - 1 } else { g };
    let mut x = vec![Gr::ZERO; base.dim(gx)];
    x[a] = one;
    let f_pow = |l: u32, v: &[Gr], h: i64| base.f_pow(h, l).apply(&ring, v);
    let mut col = dst.zero(g);
    match band {
        Band::F(k) => {
            dst.put(&mut col, g, Band::F(k + i), &x, one);
            if k >= j {
                dst.put(&mut col, g, Band::F(k - j), &x, ring.neg(ring.p_pow(j)));
            } else {
                let l = j - k;
                dst.put(&mut col, g, Band::V(l), &f_pow(l, &x, g), ring.neg(ring.p_pow(k)));
            }
        }
        Band::FD(k) => {
            dst.put(&mut col, g, Band::FD(k + i), &x, ring.p_pow(i));
            if k >= j {
                dst.put(&mut col, g, Band::FD(k - j), &x, neg);
            } else {
                let l = j - k;
                let flx = f_pow(l, &x, gx);
                dst.put(&mut col, g, Band::DV(l), &flx, neg);
                if base.dim(g) > 0 {
                    let fldx = f_pow(l, &base.apply_d(gx, &x), g);
                    dst.put(&mut col, g, Band::V(l), &fldx, one);
                }
            }
        }
        Band::V(s) => {
            let mut y = phi_gen(src, dst, ij, g, Band::F(0), a);
            for _ in 0..s {
                y = dst.module.apply_v(g, &y);
            }
            col = y;
        }
        Band::DV(s) => {
            let mut y = phi_gen(src, dst, ij, g - 1, Band::F(0), a);
            for _ in 0..s {
                y = dst.module.apply_v(g - 1, &y);
            }
            col = dst.module.apply_d(g - 1, &y);
        }
    }
    col
}

fn phi_matrix(src: &BandModel, dst: &BandModel, ij: (u32, u32), g: i64) -> Mat {
    let cols: Vec<Vec<Gr>> =
        src.generators(g).iter().map(|&(band, a)| phi_gen(src, dst, ij, g, band, a)).collect();
    Mat::from_cols(dst.module.dim(g), &cols)
}

/// `E ⋆̂ N` at truncation `(m, n)`, for `E` a Dieudonne block and `N` any
/// block over `W(F_p)`.
pub fn derived_star(e: &BlockModule, n_block: &BlockModule, m: u32, n: u32) -> Result<DerivedStar> {
    let BlockKind::Dieudonne { i, j } = *e.kind() else {
        return Err(StarError::Unsupported(format!("{} is not a Dieudonne block", e.name())));
    };
    if e.r() != 1 || n_block.r() != 1 || e.p() != n_block.p() {
        return Err(StarError::Unsupported("the derived star is only implemented for r = 1".into()));
    }
    if m < 1 || n < 2 {
        return Err(StarError::Unsupported("need m >= 1 and n >= 2".into()));
    }
    let (mf, nf) = (m + FINE.0, n + FINE.1);
    let h = i + j;
    let low = h + 2;
    let src_cut = low + (mf + 1) * h + j;
    let dst_cut = src_cut + i;
    let base = n_block.truncate(mf, nf)?;
    let src = band_model(&base, nf, src_cut)?;
    let dst = band_model(&base, nf, dst_cut)?;
    let ring: GaloisRing = base.ring().clone();
    let mut kernel: BTreeMap<i64, Mat> = BTreeMap::new();
    let mut image: BTreeMap<i64, Mat> = BTreeMap::new();
    let mut num0: BTreeMap<i64, Mat> = BTreeMap::new();
    for g in dst.module.gradings() {
        let dd = dst.module.dim(g);
        let phi = phi_matrix(&src, &dst, (i, j), g);
        if src.module.dim(g) > 0 {
            let pi = membership_projector(&ring, dd, &dst.module.rel(g));
            kernel.insert(g, nullspace(&ring, &pi.mul(&ring, &phi)));
        }
        let lows: Vec<Vec<Gr>> = dst
            .generators(g)
            .iter()
            .enumerate()
            .filter(|(_, (b, _))| match b {
                Band::F(k) | Band::FD(k) => *k <= low,
                _ => true,
            })
            .map(|(idx, _)| {
                let mut c = vec![Gr::ZERO; dd];
                c[idx] = ring.one();
                c
            })
            .collect();
        num0.insert(g, Mat::from_cols(dd, &lows).hcat(&phi));
        image.insert(g, phi);
    }
    let src_c = src.module.quotient(m, n);
    let dst_c = dst.module.quotient(m, n);
    let (hm1, _) = src_c.subquotient(&kernel, &BTreeMap::new())?;
    let (h0, _) = dst_c.subquotient(&num0, &image)?;
    let cands = candidates(e.p(), &[e.clone(), n_block.clone()])?;
    let kernel_bands = kernel_bands(&src, &src_c, &kernel);
    Ok(DerivedStar {
        level: (m, n),
        h_minus1: identify(&hm1, &cands),
        h0: identify(&h0, &cands),
        kernel_bands,
    })
}

/// Band indices whose generators lie in the kernel and survive in the
/// coarse truncation.
fn kernel_bands(src: &BandModel, coarse: &Tgm, kernel: &BTreeMap<i64, Mat>) -> Vec<KernelBands> {
    let ring = coarse.ring();
    let mut out = Vec::new();
    for (&g, z) in kernel {
        let dim = coarse.dim(g);
        let rel = coarse.rel(g);
        let span = z.hcat(&rel);
        let mut found: BTreeMap<&'static str, Vec<u32>> = BTreeMap::new();
        for (idx, &(band, _)) in src.generators(g).iter().enumerate() {
            let mut e = vec![Gr::ZERO; dim];
            e[idx] = ring.one();
            if !in_span(ring, &rel, &e) && in_span(ring, &span, &e) {
                let v = found.entry(band.family()).or_default();
                if v.last() != Some(&band.index()) {
                    v.push(band.index());
                }
            }
        }
        for (family, indices) in found {
            out.push(KernelBands { grading: g, family, indices });
        }
    }
    out
}
