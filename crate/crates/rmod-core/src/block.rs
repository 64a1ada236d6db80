//! Named building blocks with exact metadata and truncation rules.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use witt_arith::GaloisRing;

use crate::error::CoreError;
use crate::linalg::Mat;
use crate::module::Tgm;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BlockKind {
    /// `W` in grading 0 with the Witt vector Frobenius and Verschiebung.
    UnitW,
    /// `k = W/p` in grading 0 with `F = sigma`, `V = 0`.
    ResidueK,
    /// `k` in grading 0 with `F = V = d = 0`.
    DAlphaP,
    /// The elementary domino `U_t`.
    Domino { t: i64 },
    /// `E_{j/(i+j)} = R^0 / R^0 (F^i - V^j)`.
    Dieudonne { i: u32, j: u32 },
    /// A finite-length module in grading 0: generator `k` has order `p^{exps[k]}`,
    /// `F` and `V` are integer matrices acting on generators (columns are images).
    FiniteLength { exps: Vec<u32>, f: Vec<Vec<i64>>, v: Vec<Vec<i64>> },
}

/// What the heart of one grading looks like.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeurDesc {
    Zero,
    /// Torsion heart of the given length over `k`.
    Torsion(u32),
    /// Torsion-free heart of the given rank.
    Crystal(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metadata {
    /// Slopes of `F` on the torsion-free part, with multiplicities.
    pub slopes: Vec<(Ratio<i64>, u32)>,
    /// Domino numbers `T^g` (nonzero entries only).
    pub dominoes: BTreeMap<i64, u32>,
    /// Heart per grading (nonzero entries only).
    pub coeur: BTreeMap<i64, CoeurDesc>,
    /// Truncation level `(m, n)` from which invariants are stable.
    pub stable_at: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockModule {
    kind: BlockKind,
    p: u64,
    r: usize,
    meta: Metadata,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn make_block(kind: BlockKind, p: u64, r: usize) -> Result<BlockModule, CoreError> {
    GaloisRing::new(p, r, 1)?;
    let mut dominoes = BTreeMap::new();
    let mut coeur = BTreeMap::new();
    let mut slopes = Vec::new();
    let stable_at = match &kind {
        BlockKind::UnitW => {
            slopes.push((Ratio::from_integer(0), 1));
            coeur.insert(0, CoeurDesc::Crystal(1));
            (2, 2)
        }
        BlockKind::ResidueK | BlockKind::DAlphaP => {
            coeur.insert(0, CoeurDesc::Torsion(1));
            (2, 2)
        }
        BlockKind::Domino { t } => {
            dominoes.insert(0, 1);
            (2, t.unsigned_abs() as u32 + 3)
        }
        BlockKind::Dieudonne { i, j } => {
            if *i == 0 || gcd(*i, *j) != 1 {
                return Err(CoreError::NotCoprime { i: *i, j: *j });
            }
            let h = i + j;
            slopes.push((Ratio::new(*j as i64, h as i64), h));
            coeur.insert(0, CoeurDesc::Crystal(h));
            (2, h + 2)
        }
        BlockKind::FiniteLength { exps, f, v } => {
            let k = exps.len();
            if k == 0 {
                return Err(CoreError::BadFiniteLength("no generators".into()));
            }
            if exps.contains(&0) {
                return Err(CoreError::BadFiniteLength("generator exponents must be positive".into()));
            }
            for (name, m) in [("f", f), ("v", v)] {
                if m.len() != k || m.iter().any(|row| row.len() != k) {
                    return Err(CoreError::BadFiniteLength(format!("{name} must be {k}x{k}")));
                }
            }
            let len: u32 = exps.iter().sum();
            coeur.insert(0, CoeurDesc::Torsion(len));
            let emax = *exps.iter().max().expect("nonempty");
            (emax + 1, len + 2)
        }
    };
    let block = BlockModule { kind, p, r, meta: Metadata { slopes, dominoes, coeur, stable_at } };
    if let BlockKind::FiniteLength { .. } = &block.kind {
        let (m, n) = block.meta.stable_at;
        let ring = GaloisRing::new(p, r, m)?;
        let t = block.presentation(&ring, n);
        let len = t.total_length();
        let vn = t.v_pow(0, len as u32);
        for c in vn.mat.cols_iter() {
            if !t.is_zero_in(0, &c) {
                return Err(CoreError::BadFiniteLength("V is not nilpotent".into()));
            }
        }
        let report = crate::check::check_relations(&t);
        if !report.is_pass() {
            return Err(CoreError::BadFiniteLength(report.to_string()));
        }
    }
    Ok(block)
}

impl BlockModule {
    pub fn kind(&self) -> &BlockKind {
        &self.kind
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn metadata(&self) -> &Metadata {
        &self.meta
    }

    /// Short display name such as `W`, `U_-1` or `E_{1/2}`.
    pub fn name(&self) -> String {
        match &self.kind {
            BlockKind::UnitW => "W".into(),
            BlockKind::ResidueK => "k".into(),
            BlockKind::DAlphaP => "D(alpha_p)".into(),
            BlockKind::Domino { t } => format!("U_{t}"),
            BlockKind::Dieudonne { i, j } => format!("E_{{{}/{}}}", j, i + j),
            BlockKind::FiniteLength { exps, .. } => format!("L{exps:?}"),
        }
    }

    /// Gradings in which the block is nonzero.
    pub fn gradings(&self) -> Vec<i64> {
        match self.kind {
            BlockKind::Domino { .. } => vec![0, 1],
            _ => vec![0],
        }
    }

    /// Whether the block is killed by `p`.
    pub fn is_p_torsion(&self) -> bool {
        match &self.kind {
            BlockKind::ResidueK | BlockKind::DAlphaP | BlockKind::Domino { .. } => true,
            BlockKind::FiniteLength { exps, .. } => exps.iter().all(|&e| e == 1),
            _ => false,
        }
    }

    /// `M / (Fil^n + p^m)` as a presented module over `GR(p^m, r)`.
    pub fn truncate(&self, m: u32, n: u32) -> Result<Tgm, CoreError> {
        let ring = GaloisRing::new(self.p, self.r, m.max(1))?;
        self.truncate_in(&ring, n)
    }

    /// Truncation at V-depth `n` inside a given coefficient ring.
    pub fn truncate_in(&self, ring: &GaloisRing, n: u32) -> Result<Tgm, CoreError> {
        let mut t = self.presentation(ring, n);
        t.close_truncation();
        Ok(t)
    }

    /// Generators, relations and operators before `Fil^n` is imposed.
    fn presentation(&self, ring: &GaloisRing, n: u32) -> Tgm {
        let mut t = Tgm::new(ring.clone(), n);
        let p = ring.p_pow(1);
        let one = ring.one();
        match &self.kind {
            BlockKind::UnitW => {
                t.add_grading(0, vec!["1".into()], Mat::zeros(1, 0));
                t.set_f(0, Mat::scalar(ring, 1, one));
                t.set_v(0, Mat::scalar(ring, 1, p));
            }
            BlockKind::ResidueK => {
                t.add_grading(0, vec!["1".into()], Mat::scalar(ring, 1, p));
                t.set_f(0, Mat::scalar(ring, 1, one));
            }
            BlockKind::DAlphaP => {
                t.add_grading(0, vec!["1".into()], Mat::scalar(ring, 1, p));
            }
            BlockKind::Domino { t: tt } => domino(&mut t, ring, *tt, n),
            BlockKind::Dieudonne { i, j } => dieudonne(&mut t, ring, *i, *j),
            BlockKind::FiniteLength { exps, f, v } => {
                let k = exps.len();
                let labels = (0..k).map(|a| format!("g{a}")).collect();
                let mut rel = Mat::zeros(k, k);
                for (a, &e) in exps.iter().enumerate() {
                    rel.set(a, a, ring.p_pow(e.min(ring.precision())));
                }
                t.add_grading(0, labels, rel);
                t.set_f(0, Mat::from_int_rows(ring, f));
                t.set_v(0, Mat::from_int_rows(ring, v));
            }
        }
        t
    }
}

impl fmt::Display for BlockModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn domino(t: &mut Tgm, ring: &GaloisRing, tt: i64, n: u32) {
    let n = n as i64;
    let p = ring.p_pow(1);
    let one = ring.one();
    let g0 = n.max(0) as usize;
    let g1_start = tt;
    let g1 = (n - g1_start).max(0) as usize;
    t.add_grading(0, (0..g0).map(|j| format!("V^{j}")).collect(), Mat::scalar(ring, g0, p));
    t.add_grading(1, (0..g1).map(|k| format!("dV^{}", g1_start + k as i64)).collect(), Mat::scalar(ring, g1, p));
    let mut v = Mat::zeros(g0, g0);
    for j in 0..g0.saturating_sub(1) {
        v.set(j + 1, j, one);
    }
    t.set_v(0, v);
    let mut f1 = Mat::zeros(g1, g1);
    for k in 1..g1 {
        f1.set(k - 1, k, one);
    }
    t.set_f(1, f1);
    let mut d = Mat::zeros(g1, g0);
    for j in 0..g0 as i64 {
        if j >= tt.max(0) {
            let k = (j - g1_start) as usize;
            d.set(k, j as usize, one);
        }
    }
    t.set_d(0, d);
}

fn dieudonne(t: &mut Tgm, ring: &GaloisRing, i: u32, j: u32) {
    let p = ring.p_pow(1);
    let one = ring.one();
    if j == 0 {
        t.add_grading(0, vec!["f1".into()], Mat::zeros(1, 0));
        t.set_f(0, Mat::scalar(ring, 1, one));
        t.set_v(0, Mat::scalar(ring, 1, p));
        return;
    }
    let (i, j) = (i as usize, j as usize);
    let h = i + j;
    let e = |a: usize| a;
    let f = |s: usize| if s == 0 { 0 } else { j + s - 1 };
    let mut labels: Vec<String> = (0..j).map(|a| format!("e{a}")).collect();
    labels.extend((1..=i).map(|s| format!("f{s}")));
    t.add_grading(0, labels, Mat::zeros(h, 0));
    let mut fm = Mat::zeros(h, h);
    let mut vm = Mat::zeros(h, h);
    // F e_0 = f_1, F e_t = p e_{t-1}, F f_s = f_{s+1}, F f_i = p e_{j-1}
    fm.set(f(1), e(0), one);
    for a in 1..j {
        fm.set(e(a - 1), e(a), p);
    }
    for s in 1..i {
        fm.set(f(s + 1), f(s), one);
    }
    fm.set(e(j - 1), f(i), p);
    // V e_t = e_{t+1}, V e_{j-1} = f_i, V f_s = p f_{s-1}, V f_1 = p e_0
    for a in 0..j - 1 {
        vm.set(e(a + 1), e(a), one);
    }
    vm.set(f(i), e(j - 1), one);
    for s in 2..=i {
        vm.set(f(s - 1), f(s), p);
    }
    vm.set(e(0), f(1), p);
    t.set_f(0, fm);
    t.set_v(0, vm);
}
