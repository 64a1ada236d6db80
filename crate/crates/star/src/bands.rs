//! `ℛ ⋆ N` through its four-band decomposition
//! `⊕_{0<s} V^s(1 ⋆ N) ⊕ ⊕_{k>=0} F^k ⋆ N ⊕ ⊕_{0<s} dV^s(1 ⋆ N) ⊕ ⊕_{k>=0} F^k d ⋆ N`.
//!
//! The V-bands stop at the V-depth `n`, where `V^s(1 ⋆ Fil^{n-s} N)` vanishes;
//! the F-bands stop at a cut `K`, above which `F` is set to zero. Only
//! `r = 1` is modelled.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rmod_core::{BlockModule, GaloisRing, Gr, Mat, SemiMap, Tgm};
use serde::Serialize;

use crate::error::{Result, StarError};

/// One band of `ℛ ⋆ N`, by the element of `ℛ` it starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Band {
    /// `V^s(1 ⋆ x)`, `0 < s < n`.
    V(u32),
    /// `F^k ⋆ x`, `0 <= k <= K`.
    F(u32),
    /// `dV^s(1 ⋆ x)`, `0 < s < n`.
    DV(u32),
    /// `F^k d ⋆ x`, `0 <= k <= K`.
    FD(u32),
}

impl Band {
    /// Whether the band carries `N` in the grading below its own.
    pub fn is_d(self) -> bool {
        matches!(self, Band::DV(_) | Band::FD(_))
    }

    pub fn family(self) -> &'static str {
        match self {
            Band::V(_) => "V^s(1*N)",
            Band::F(_) => "F^k*N",
            Band::DV(_) => "dV^s(1*N)",
            Band::FD(_) => "F^kd*N",
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Band::V(s) | Band::F(s) | Band::DV(s) | Band::FD(s) => s,
        }
    }
}

/// `(ℛ ⋆ N) / Fil^n` with F-bands up to `cut`.
#[derive(Clone, Debug)]
pub struct BandModel {
    pub module: Tgm,
    /// The truncation of `N` the bands are built from.
    pub base: Tgm,
    pub depth: u32,
    pub cut: u32,
    gens: BTreeMap<i64, Vec<(Band, usize)>>,
    pos: HashMap<(i64, Band, usize), usize>,
}

impl BandModel {
    pub fn generators(&self, g: i64) -> &[(Band, usize)] {
        self.gens.get(&g).map_or(&[], Vec::as_slice)
    }

    pub fn ring(&self) -> &GaloisRing {
        self.module.ring()
    }

    /// Adds `c · band(x)` to `col` in grading `g`, where `x` lies in grading
    /// `g` of `N` (or `g - 1` for the d-bands). Bands past the V-depth vanish
    /// and bands past the cut are dropped; `dV^0(1 ⋆ x)` expands to
    /// `d ⋆ x + 1 ⋆ dx`.
    pub fn put(&self, col: &mut [Gr], g: i64, band: Band, x: &[Gr], c: Gr) {
        let ring = self.ring().clone();
        let band = match band {
            Band::V(0) => Band::F(0),
            Band::DV(0) => {
                self.put(col, g, Band::FD(0), x, c);
                let dx = self.base.apply_d(g - 1, x);
                if self.base.dim(g) > 0 {
                    self.put(col, g, Band::F(0), &dx, c);
                }
                return;
            }
            b => b,
        };
        let out_of_range = match band {
            Band::V(s) | Band::DV(s) => s >= self.depth,
            Band::F(k) | Band::FD(k) => k > self.cut,
        };
        if out_of_range || c.is_zero() {
            return;
        }
        for (a, &xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let k = self.pos[&(g, band, a)];
            col[k] = ring.add(col[k], ring.mul(c, xa));
        }
    }

    fn unit_n(&self, g: i64, a: usize) -> Vec<Gr> {
        let mut e = vec![Gr::ZERO; self.base.dim(g)];
        e[a] = self.ring().one();
        e
    }

    /// A fresh zero column for grading `g`.
    pub fn zero(&self, g: i64) -> Vec<Gr> {
        vec![Gr::ZERO; self.module_dim(g)]
    }
}

/// `ℛ ⋆ N` for a truncation `n_trunc` of `N`, at V-depth `n` and F-cut `cut`.
pub fn band_model(n_trunc: &Tgm, n: u32, cut: u32) -> Result<BandModel> {
    let ring = n_trunc.ring().clone();
    if ring.r() != 1 {
        return Err(StarError::Unsupported("the band model is only implemented for r = 1".into()));
    }
    if n < 1 {
        return Err(StarError::Unsupported("V-depth must be positive".into()));
    }
    let base = n_trunc;
    let mut gs: BTreeSet<i64> = BTreeSet::new();
    for g in base.gradings() {
        if base.dim(g) > 0 {
            gs.insert(g);
            gs.insert(g + 1);
        }
    }
    let mut gens: BTreeMap<i64, Vec<(Band, usize)>> = BTreeMap::new();
    let mut pos = HashMap::new();
    for &g in &gs {
        let mut v = Vec::new();
        for s in 1..n {
            v.extend((0..base.dim(g)).map(|a| (Band::V(s), a)));
        }
        for k in 0..=cut {
            v.extend((0..base.dim(g)).map(|a| (Band::F(k), a)));
        }
        for s in 1..n {
            v.extend((0..base.dim(g - 1)).map(|a| (Band::DV(s), a)));
        }
        for k in 0..=cut {
            v.extend((0..base.dim(g - 1)).map(|a| (Band::FD(k), a)));
        }
        for (i, &(b, a)) in v.iter().enumerate() {
            pos.insert((g, b, a), i);
        }
        gens.insert(g, v);
    }
    let mut model = BandModel { module: Tgm::new(ring.clone(), n), base: base.clone(), depth: n, cut, gens, pos };
    for &g in &gs {
        let labels = model.gens[&g]
            .iter()
            .map(|&(b, a)| {
                let x = if b.is_d() { &base.labels(g - 1)[a] } else { &base.labels(g)[a] };
                match b {
                    Band::V(s) => format!("V^{s}(1*{x})"),
                    Band::F(k) => format!("F^{k}*{x}"),
                    Band::DV(s) => format!("dV^{s}(1*{x})"),
                    Band::FD(k) => format!("F^{k}d*{x}"),
                }
            })
            .collect();
        let rel = band_relations(&model, g);
        model.module.add_grading(g, labels, rel);
    }
    let ops: Vec<(i64, Mat, Mat, Option<Mat>)> = gs.iter().map(|&g| band_operators(&model, g)).collect();
    for (g, f, v, d) in ops {
        model.module.set_f_map(g, SemiMap::new(f, 1));
        model.module.set_v_map(g, SemiMap::new(v, -1));
        if let Some(d) = d {
            model.module.set_d(g, d);
        }
    }
    model.module.close_truncation();
    Ok(model)
}

/// The band model of a block truncated at `(m, n)`.
pub fn star_with_r(block: &BlockModule, m: u32, n: u32, cut: u32) -> Result<BandModel> {
    band_model(&block.truncate(m, n)?, n, cut)
}

fn band_relations(model: &BandModel, g: i64) -> Mat {
    let base = &model.base;
    let ring = model.ring();
    let one = ring.one();
    let n = model.depth;
    let mut cols: Vec<Vec<Gr>> = Vec::new();
    let mut push = |band: Band, x: &[Gr]| {
        let mut col = model.zero(g);
        model.put(&mut col, g, band, x, one);
        cols.push(col);
    };
    for (gx, is_d) in [(g, false), (g - 1, true)] {
        if base.dim(gx) == 0 {
            continue;
        }
        let rel = base.rel(gx);
        for s in 1..n {
            let band = if is_d { Band::DV(s) } else { Band::V(s) };
            for x in rel.cols_iter().chain(base.fil_gens(n - s, gx).cols_iter()) {
                push(band, &x);
            }
        }
        for k in 0..=model.cut {
            let band = if is_d { Band::FD(k) } else { Band::F(k) };
            for x in rel.cols_iter() {
                push(band, &x);
            }
        }
    }
    Mat::from_cols(model.module_dim(g), &cols)
}

impl BandModel {
    fn module_dim(&self, g: i64) -> usize {
        self.gens.get(&g).map_or(0, Vec::len)
    }
}

fn band_operators(model: &BandModel, g: i64) -> (i64, Mat, Mat, Option<Mat>) {
    let base = &model.base;
    let ring = model.ring().clone();
    let p = ring.p_pow(1);
    let one = ring.one();
    let neg = ring.neg(one);
    let dim = model.module_dim(g);
    let up = model.module_dim(g + 1);
    let mut f = Mat::zeros(dim, dim);
    let mut v = Mat::zeros(dim, dim);
    let mut d = Mat::zeros(up, dim);
    for (col_idx, &(band, a)) in model.gens[&g].iter().enumerate() {
        let gx = if band.is_d() { g - 1 } else { g };
        let x = model.unit_n(gx, a);
        let fx = base.apply_f(gx, &x);
        let vx = base.apply_v(gx, &x);
        let mut fc = model.zero(g);
        let mut vc = model.zero(g);
        let mut dc = vec![Gr::ZERO; up];
        match band {
            Band::V(s) => {
                model.put(&mut fc, g, Band::V(s - 1), &x, p);
                model.put(&mut vc, g, Band::V(s + 1), &x, one);
                if up > 0 {
                    model.put(&mut dc, g + 1, Band::DV(s), &x, one);
                }
            }
            Band::F(k) => {
                model.put(&mut fc, g, Band::F(k + 1), &fx, one);
                if k == 0 {
                    model.put(&mut vc, g, Band::V(1), &x, one);
                } else {
                    model.put(&mut vc, g, Band::F(k - 1), &vx, one);
                }
                if up > 0 {
                    model.put(&mut dc, g + 1, Band::FD(k), &x, ring.p_pow(k));
                    if base.dim(g + 1) > 0 {
                        model.put(&mut dc, g + 1, Band::F(k), &base.apply_d(g, &x), one);
                    }
                }
            }
            Band::DV(s) => {
                model.put(&mut fc, g, Band::DV(s - 1), &x, one);
                model.put(&mut vc, g, Band::DV(s + 1), &x, p);
            }
            Band::FD(k) => {
                model.put(&mut fc, g, Band::FD(k + 1), &fx, one);
                if k == 0 {
                    model.put(&mut vc, g, Band::DV(1), &x, p);
                    if base.dim(g) > 0 {
                        model.put(&mut vc, g, Band::V(1), &base.apply_d(gx, &x), neg);
                    }
                } else {
                    model.put(&mut vc, g, Band::FD(k - 1), &vx, one);
                }
                if up > 0 && base.dim(g) > 0 {
                    model.put(&mut dc, g + 1, Band::FD(k), &base.apply_d(gx, &x), neg);
                }
            }
        }
        for (i, y) in fc.into_iter().enumerate() {
            f.set(i, col_idx, y);
        }
        for (i, y) in vc.into_iter().enumerate() {
            v.set(i, col_idx, y);
        }
        for (i, y) in dc.into_iter().enumerate() {
            d.set(i, col_idx, y);
        }
    }
    (g, f, v, (up > 0).then_some(d))
}

/// One band family in a grading, with the indices it occupies and its length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BandSummary {
    pub grading: i64,
    pub family: &'static str,
    pub indices: Vec<u32>,
    pub length: u64,
}

/// The decomposition of a band model: per grading and family, the band
/// indices present and the total length they contribute.
pub fn describe(model: &BandModel) -> Vec<BandSummary> {
    let ring = model.ring();
    let mut out = Vec::new();
    for g in model.module.gradings() {
        let mut by_family: BTreeMap<&'static str, BTreeMap<u32, Vec<usize>>> = BTreeMap::new();
        for (i, &(b, _)) in model.generators(g).iter().enumerate() {
            by_family.entry(b.family()).or_default().entry(b.index()).or_default().push(i);
        }
        let dim = model.module.dim(g);
        let rel = model.module.rel(g);
        for (family, bands) in by_family {
            let mut indices = Vec::new();
            let mut length = 0;
            for (idx, members) in bands {
                let l = band_length(ring, dim, &rel, &members);
                if l > 0 {
                    indices.push(idx);
                    length += l;
                }
            }
            if !indices.is_empty() {
                out.push(BandSummary { grading: g, family, indices, length });
            }
        }
    }
    out
}

/// Length of the submodule spanned by the generators `members`, as the drop
/// in quotient length when they are added to the relations.
pub fn band_length(ring: &GaloisRing, dim: usize, rel: &Mat, members: &[usize]) -> u64 {
    use rmod_core::linalg::quotient_length;
    let cols: Vec<Vec<Gr>> = members
        .iter()
        .map(|&i| {
            let mut e = vec![Gr::ZERO; dim];
            e[i] = ring.one();
            e
        })
        .collect();
    let with = rel.hcat(&Mat::from_cols(dim, &cols));
    quotient_length(ring, dim, rel) - quotient_length(ring, dim, &with)
}
