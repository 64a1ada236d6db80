//! Graded left modules over the Cartier-Dieudonne-Raynaud ring at finite
//! truncation.
//!
//! Each grading is a presented module `R^a / span(rel)` over `R = GR(p^M, r)`.
//! `F`, `V` and `d` are stored as lifts on the ambient generators: `F` as a
//! sigma-semilinear matrix, `V` as a sigma-inverse-semilinear matrix and `d`
//! as a linear map from grading `g` to grading `g + 1`. The standard
//! filtration `Fil^n` is preserved by `V` and `d` but `F` only maps `Fil^n`
//! into `Fil^{n-1}`, so identities involving `F` are only meaningful modulo
//! `Fil^{n-1}`.

use std::collections::BTreeMap;

use serde::Serialize;
use witt_arith::{GaloisRing, Gr};

use crate::error::CoreError;
use crate::linalg::{in_span, quotient_length, vec_sigma, Mat, Subquotient};

/// A matrix acting as `x -> mat * sigma^twist(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiMap {
    pub mat: Mat,
    pub twist: i64,
}

impl SemiMap {
    pub fn new(mat: Mat, twist: i64) -> Self {
        SemiMap { mat, twist }
    }

    pub fn zero(rows: usize, cols: usize, twist: i64) -> Self {
        SemiMap { mat: Mat::zeros(rows, cols), twist }
    }

    pub fn apply(&self, ring: &GaloisRing, x: &[Gr]) -> Vec<Gr> {
        self.mat.apply(ring, &vec_sigma(ring, x, self.twist))
    }

    /// `self ∘ other`.
    pub fn after(&self, ring: &GaloisRing, other: &SemiMap) -> SemiMap {
        SemiMap {
            mat: self.mat.mul(ring, &other.mat.sigma_pow(ring, self.twist)),
            twist: self.twist + other.twist,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub labels: Vec<String>,
    pub rel: Mat,
}

/// Truncated graded module: a finite presentation of `M / (Fil^n + p^m)`.
#[derive(Clone, Debug)]
pub struct Tgm {
    ring: GaloisRing,
    prec: u32,
    depth: u32,
    pieces: BTreeMap<i64, Piece>,
    f: BTreeMap<i64, SemiMap>,
    v: BTreeMap<i64, SemiMap>,
    d: BTreeMap<i64, Mat>,
}

/// Grading-wise linear map between the ambient generators of two modules.
#[derive(Clone, Debug, Default)]
pub struct GradedMap {
    pub mats: BTreeMap<i64, Mat>,
}

impl GradedMap {
    pub fn get(&self, g: i64, rows: usize, cols: usize) -> Mat {
        self.mats.get(&g).cloned().unwrap_or_else(|| Mat::zeros(rows, cols))
    }
}

impl Tgm {
    pub fn new(ring: GaloisRing, depth: u32) -> Self {
        let prec = ring.precision();
        Tgm {
            ring,
            prec,
            depth,
            pieces: BTreeMap::new(),
            f: BTreeMap::new(),
            v: BTreeMap::new(),
            d: BTreeMap::new(),
        }
    }

    pub fn add_grading(&mut self, g: i64, labels: Vec<String>, rel: Mat) {
        assert_eq!(rel.rows(), labels.len(), "relation rows must match generators");
        self.pieces.insert(g, Piece { labels, rel });
    }

    pub fn set_f(&mut self, g: i64, mat: Mat) {
        self.set_f_map(g, SemiMap::new(mat, 1));
    }

    pub fn set_v(&mut self, g: i64, mat: Mat) {
        self.set_v_map(g, SemiMap::new(mat, -1));
    }

    pub fn set_f_map(&mut self, g: i64, map: SemiMap) {
        debug_assert_eq!((map.mat.rows(), map.mat.cols()), (self.dim(g), self.dim(g)));
        self.f.insert(g, map);
    }

    pub fn set_v_map(&mut self, g: i64, map: SemiMap) {
        debug_assert_eq!((map.mat.rows(), map.mat.cols()), (self.dim(g), self.dim(g)));
        self.v.insert(g, map);
    }

    /// `d` from grading `g` to grading `g + 1`.
    pub fn set_d(&mut self, g: i64, mat: Mat) {
        debug_assert_eq!((mat.rows(), mat.cols()), (self.dim(g + 1), self.dim(g)));
        self.d.insert(g, mat);
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }
    pub fn p(&self) -> u64 {
        self.ring.p()
    }
    pub fn r(&self) -> usize {
        self.ring.r()
    }
    /// Logical p-precision `m` (at most the ring precision).
    pub fn precision(&self) -> u32 {
        self.prec
    }
    /// V-depth `n`.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn gradings(&self) -> Vec<i64> {
        self.pieces.keys().copied().collect()
    }

    pub fn dim(&self, g: i64) -> usize {
        self.pieces.get(&g).map_or(0, |p| p.labels.len())
    }

    pub fn labels(&self, g: i64) -> &[String] {
        self.pieces.get(&g).map_or(&[], |p| &p.labels)
    }

    pub fn rel(&self, g: i64) -> Mat {
        match self.pieces.get(&g) {
            Some(p) => p.rel.clone(),
            None => Mat::zeros(0, 0),
        }
    }

    pub fn f_map(&self, g: i64) -> SemiMap {
        self.f.get(&g).cloned().unwrap_or_else(|| SemiMap::zero(self.dim(g), self.dim(g), 1))
    }

    pub fn v_map(&self, g: i64) -> SemiMap {
        self.v.get(&g).cloned().unwrap_or_else(|| SemiMap::zero(self.dim(g), self.dim(g), -1))
    }

    pub fn d_mat(&self, g: i64) -> Mat {
        self.d.get(&g).cloned().unwrap_or_else(|| Mat::zeros(self.dim(g + 1), self.dim(g)))
    }

    pub fn apply_f(&self, g: i64, x: &[Gr]) -> Vec<Gr> {
        self.f_map(g).apply(&self.ring, x)
    }

    pub fn apply_v(&self, g: i64, x: &[Gr]) -> Vec<Gr> {
        self.v_map(g).apply(&self.ring, x)
    }

    pub fn apply_d(&self, g: i64, x: &[Gr]) -> Vec<Gr> {
        self.d_mat(g).apply(&self.ring, x)
    }

    /// `V^s` on grading `g`.
    pub fn v_pow(&self, g: i64, s: u32) -> SemiMap {
        let n = self.dim(g);
        let mut acc = SemiMap::new(Mat::identity(&self.ring, n), 0);
        let v = self.v_map(g);
        for _ in 0..s {
            acc = v.after(&self.ring, &acc);
        }
        acc
    }

    /// `F^s` on grading `g`.
    pub fn f_pow(&self, g: i64, s: u32) -> SemiMap {
        let n = self.dim(g);
        let mut acc = SemiMap::new(Mat::identity(&self.ring, n), 0);
        let f = self.f_map(g);
        for _ in 0..s {
            acc = f.after(&self.ring, &acc);
        }
        acc
    }

    /// Generators of `V^s M^g + dV^s M^{g-1}` in the ambient of grading `g`.
    pub fn fil_gens(&self, s: u32, g: i64) -> Mat {
        let n = self.dim(g);
        let vs = self.v_pow(g, s).mat;
        let below = self.dim(g - 1);
        if below == 0 {
            return vs;
        }
        let dvs = self.d_mat(g - 1).mul(&self.ring, &self.v_pow(g - 1, s).mat);
        debug_assert_eq!(dvs.rows(), n);
        vs.hcat(&dvs)
    }

    /// Relations of `M^g / (Fil^{n_c} + p^{m_c})` in the ambient coordinates.
    pub fn level_rel(&self, g: i64, m_c: u32, n_c: u32) -> Mat {
        let n = self.dim(g);
        let mut parts = vec![self.rel(g)];
        if m_c < self.ring.precision() {
            parts.push(Mat::scalar(&self.ring, n, self.ring.p_pow(m_c)));
        }
        parts.push(self.fil_gens(n_c, g));
        let refs: Vec<&Mat> = parts.iter().collect();
        Mat::hcat_all(n, &refs)
    }

    /// `Fil^s` as generator matrices, one per grading.
    pub fn standard_filtration(&self, s: u32) -> Result<BTreeMap<i64, Mat>, CoreError> {
        if s > self.depth {
            return Err(CoreError::FiltrationRange { s, n: self.depth });
        }
        Ok(self.gradings().into_iter().map(|g| (g, self.fil_gens(s, g))).collect())
    }

    /// Adds `Fil^depth` to the relations.
    pub fn close_truncation(&mut self) {
        let extra: Vec<(i64, Mat)> =
            self.gradings().into_iter().map(|g| (g, self.fil_gens(self.depth, g))).collect();
        for (g, m) in extra {
            let piece = self.pieces.get_mut(&g).expect("grading exists");
            piece.rel = piece.rel.hcat(&m);
        }
    }

    /// The coarser truncation `M / (Fil^{n_c} + p^{m_c})` on the same ambient.
    pub fn quotient(&self, m_c: u32, n_c: u32) -> Tgm {
        let mut out = self.clone();
        for g in self.gradings() {
            let rel = self.level_rel(g, m_c, n_c);
            out.pieces.get_mut(&g).expect("grading").rel = rel;
        }
        out.prec = m_c.min(self.prec);
        out.depth = n_c.min(self.depth);
        out
    }

    pub fn length(&self, g: i64) -> u64 {
        let n = self.dim(g);
        if n == 0 {
            return 0;
        }
        quotient_length(&self.ring, n, &self.rel(g))
    }

    pub fn lengths(&self) -> BTreeMap<i64, u64> {
        self.gradings()
            .into_iter()
            .map(|g| (g, self.length(g)))
            .filter(|&(_, l)| l > 0)
            .collect()
    }

    pub fn total_length(&self) -> u64 {
        self.gradings().into_iter().map(|g| self.length(g)).sum()
    }

    pub fn is_zero_in(&self, g: i64, x: &[Gr]) -> bool {
        if x.iter().all(|c| c.is_zero()) {
            return true;
        }
        in_span(&self.ring, &self.rel(g), x)
    }

    /// Whether `x` vanishes modulo the relations plus `Fil^{depth-1}`.
    pub fn is_zero_mod_f_slack(&self, g: i64, x: &[Gr]) -> bool {
        if self.is_zero_in(g, x) {
            return true;
        }
        let slack = self.fil_gens(self.depth.saturating_sub(1), g);
        in_span(&self.ring, &self.rel(g).hcat(&slack), x)
    }

    /// The subquotient `num / den` with induced operators. The relations of
    /// each grading are added to `den`; `num` must be stable under `F`, `V`, `d`.
    pub fn subquotient(
        &self,
        num: &BTreeMap<i64, Mat>,
        den: &BTreeMap<i64, Mat>,
    ) -> Result<(Tgm, BTreeMap<i64, Subquotient>), CoreError> {
        let ring = &self.ring;
        let mut sqs: BTreeMap<i64, Subquotient> = BTreeMap::new();
        for g in self.gradings() {
            let n = self.dim(g);
            let nm = num.get(&g).cloned().unwrap_or_else(|| Mat::zeros(n, 0));
            let mut dm = self.rel(g);
            if let Some(extra) = den.get(&g) {
                dm = dm.hcat(extra);
            }
            let sq = Subquotient::new(ring, &nm, &dm);
            sqs.insert(g, sq);
        }
        let mut out = Tgm::new(ring.clone(), self.depth);
        out.prec = self.prec;
        for (&g, sq) in &sqs {
            if sq.num_gens() == 0 {
                continue;
            }
            let labels = (0..sq.num_gens()).map(|k| format!("b{k}")).collect();
            let mut rel = Mat::zeros(sq.num_gens(), sq.num_gens());
            for (k, &e) in sq.exps().iter().enumerate() {
                rel.set(k, k, ring.p_pow(e));
            }
            out.add_grading(g, labels, rel);
        }
        for (&g, sq) in &sqs {
            if sq.num_gens() == 0 {
                continue;
            }
            let fm = sq
                .induced(ring, sq, |x| self.apply_f(g, x))
                .ok_or(CoreError::NotStable("F"))?;
            out.set_f_map(g, SemiMap::new(fm, self.f_map(g).twist));
            let vm = sq
                .induced(ring, sq, |x| self.apply_v(g, x))
                .ok_or(CoreError::NotStable("V"))?;
            out.set_v_map(g, SemiMap::new(vm, self.v_map(g).twist));
            match sqs.get(&(g + 1)) {
                Some(t) if t.num_gens() > 0 => {
                    let dm = sq
                        .induced(ring, t, |x| self.apply_d(g, x))
                        .ok_or(CoreError::NotStable("d"))?;
                    out.set_d(g, dm);
                }
                Some(t) => {
                    for k in 0..sq.num_gens() {
                        let y = self.apply_d(g, &sq.basis().col(k));
                        if t.is_zero_class(ring, &y) != Some(true) {
                            return Err(CoreError::NotStable("d"));
                        }
                    }
                }
                None => {}
            }
        }
        Ok((out, sqs))
    }

    /// Smith-normalised presentation: every grading becomes `⊕ R/p^{e_k}`.
    pub fn normal_form(&self) -> (Tgm, BTreeMap<i64, Subquotient>) {
        let num: BTreeMap<i64, Mat> = self
            .gradings()
            .into_iter()
            .map(|g| (g, Mat::identity(&self.ring, self.dim(g))))
            .collect();
        self.subquotient(&num, &BTreeMap::new()).expect("whole module is stable")
    }

    /// Invariant factor exponents per grading.
    pub fn exponents(&self) -> BTreeMap<i64, Vec<u32>> {
        let (nf, _) = self.normal_form();
        nf.gradings()
            .into_iter()
            .map(|g| {
                let mut e: Vec<u32> = (0..nf.dim(g)).map(|k| self.ring.valuation(nf.rel(g).get(k, k))).collect();
                e.sort_unstable();
                (g, e)
            })
            .collect()
    }

    /// Problems with `map: self -> other` as a morphism of truncated modules.
    pub fn morphism_defects(&self, other: &Tgm, map: &GradedMap) -> Vec<String> {
        let ring = &self.ring;
        let mut out = Vec::new();
        for g in self.gradings() {
            let (n, t) = (self.dim(g), other.dim(g));
            let a = map.get(g, t, n);
            for c in self.rel(g).cols_iter() {
                if !other.is_zero_in(g, &a.apply(ring, &c)) {
                    out.push(format!("relation not preserved in grading {g}"));
                    break;
                }
            }
            let a_up = map.get(g + 1, other.dim(g + 1), self.dim(g + 1));
            for k in 0..n {
                let mut e = vec![Gr::ZERO; n];
                e[k] = ring.one();
                let ae = a.apply(ring, &e);
                let lhs_f = other.apply_f(g, &ae);
                let rhs_f = a.apply(ring, &self.apply_f(g, &e));
                if !other.is_zero_mod_f_slack(g, &linalg_sub(ring, &lhs_f, &rhs_f)) {
                    out.push(format!("F does not commute on {} (grading {g})", self.labels(g)[k]));
                }
                let lhs_v = other.apply_v(g, &ae);
                let rhs_v = a.apply(ring, &self.apply_v(g, &e));
                if !other.is_zero_in(g, &linalg_sub(ring, &lhs_v, &rhs_v)) {
                    out.push(format!("V does not commute on {} (grading {g})", self.labels(g)[k]));
                }
                let lhs_d = other.apply_d(g, &ae);
                let rhs_d = a_up.apply(ring, &self.apply_d(g, &e));
                if !other.is_zero_in(g + 1, &linalg_sub(ring, &lhs_d, &rhs_d)) {
                    out.push(format!("d does not commute on {} (grading {g})", self.labels(g)[k]));
                }
            }
        }
        out
    }

    /// Whether `map` is an isomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &Tgm, map: &GradedMap) -> bool {
        if !self.morphism_defects(other, map).is_empty() {
            return false;
        }
        let mut gs: Vec<i64> = self.gradings();
        gs.extend(other.gradings());
        gs.sort_unstable();
        gs.dedup();
        for g in gs {
            if self.length(g) != other.length(g) {
                return false;
            }
            let t = other.dim(g);
            if t == 0 {
                continue;
            }
            let a = map.get(g, t, self.dim(g));
            let span = a.hcat(&other.rel(g));
            if quotient_length(&self.ring, t, &span) != 0 {
                return false;
            }
        }
        true
    }

    /// `M(s)`, whose grading `g` is the grading `g + s` of `M`.
    pub fn twist(&self, s: i64) -> Tgm {
        let shift_keys = |m: &BTreeMap<i64, SemiMap>| m.iter().map(|(&g, v)| (g - s, v.clone())).collect();
        Tgm {
            ring: self.ring.clone(),
            prec: self.prec,
            depth: self.depth,
            pieces: self.pieces.iter().map(|(&g, v)| (g - s, v.clone())).collect(),
            f: shift_keys(&self.f),
            v: shift_keys(&self.v),
            d: self.d.iter().map(|(&g, v)| (g - s, v.clone())).collect(),
        }
    }

    pub fn to_json(&self) -> TgmJson {
        let ring = &self.ring;
        let entry = |x: Gr| {
            if ring.r() == 1 {
                Entry::Int(x.0[0])
            } else {
                Entry::Poly(x.0[..ring.r()].to_vec())
            }
        };
        let rows = |m: &Mat| -> Vec<Vec<Entry>> {
            (0..m.rows()).map(|i| (0..m.cols()).map(|j| entry(m.get(i, j))).collect()).collect()
        };
        let (nf, _) = self.normal_form();
        let mut gradings = BTreeMap::new();
        for g in nf.gradings() {
            let exps = (0..nf.dim(g)).map(|k| ring.valuation(nf.rel(g).get(k, k))).collect();
            gradings.insert(
                g.to_string(),
                PieceJson {
                    d: rows(&nf.d_mat(g)),
                    exps,
                    f: rows(&nf.f_map(g).mat),
                    v: rows(&nf.v_map(g).mat),
                },
            );
        }
        TgmJson { gradings, m: self.prec, n: self.depth, p: ring.p(), r: ring.r() }
    }
}

fn linalg_sub(ring: &GaloisRing, a: &[Gr], b: &[Gr]) -> Vec<Gr> {
    crate::linalg::vec_sub(ring, a, b)
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Entry {
    Int(u64),
    Poly(Vec<u64>),
}

/// Serialised normal form; `d` maps grading `g` to `g + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct PieceJson {
    #[serde(rename = "F")]
    pub f: Vec<Vec<Entry>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<Entry>>,
    pub d: Vec<Vec<Entry>>,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TgmJson {
    pub gradings: BTreeMap<String, PieceJson>,
    pub m: u32,
    pub n: u32,
    pub p: u64,
    pub r: usize,
}
