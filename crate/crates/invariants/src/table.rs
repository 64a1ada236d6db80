//! Invariants of formal objects `Σ M_a(i_a)[j_a]` and their tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rmod_core::{BlockKind, BlockModule, FormalObject, Summand};
use serde::{Serialize, Serializer};

use crate::complex::{block_rn_complex, block_tot_complex, TruncatedComplex};
use crate::error::{InvError, Result};
use crate::local::{block_invariants, working_level, BlockInvariants, TotCell, Trunc};
use crate::newton::{Polygon, Q};

pub type Cell = (i64, i64);

/// Computes block invariants once per block kind.
#[derive(Default)]
pub struct BlockCache {
    trunc: Trunc,
    map: HashMap<(BlockKind, u64, usize), BlockInvariants>,
}

impl BlockCache {
    pub fn new(trunc: Trunc) -> Self {
        BlockCache { trunc, map: HashMap::new() }
    }

    pub fn get(&mut self, block: &BlockModule) -> Result<&BlockInvariants> {
        let key = (block.kind().clone(), block.p(), block.r());
        if !self.map.contains_key(&key) {
            let inv = block_invariants(block, self.trunc)?;
            self.map.insert(key.clone(), inv);
        }
        Ok(&self.map[&key])
    }
}

fn add_cell<V: Copy + std::ops::Add<Output = V>>(map: &mut BTreeMap<Cell, V>, k: Cell, v: V) {
    map.entry(k).and_modify(|x| *x = *x + v).or_insert(v);
}

/// `h^{i,j} = dim H^j(R_1 ⊗^L X)^i`.
pub fn hodge_numbers(x: &FormalObject, trunc: Trunc) -> Result<BTreeMap<Cell, u64>> {
    hodge_with(x, &mut BlockCache::new(trunc))
}

fn hodge_with(x: &FormalObject, cache: &mut BlockCache) -> Result<BTreeMap<Cell, u64>> {
    let mut out = BTreeMap::new();
    for s in x.summands() {
        for (&(g, c), &v) in &cache.get(&s.block)?.hodge {
            add_cell(&mut out, s.place(g, c), v);
        }
    }
    Ok(out)
}

/// `T^{i,j} = T^i(H^j(X))`.
pub fn domino_numbers(x: &FormalObject, trunc: Trunc) -> Result<BTreeMap<Cell, u64>> {
    domino_with(x, &mut BlockCache::new(trunc))
}

fn domino_with(x: &FormalObject, cache: &mut BlockCache) -> Result<BTreeMap<Cell, u64>> {
    let mut out = BTreeMap::new();
    for s in x.summands() {
        for (&g, &v) in &cache.get(&s.block)?.domino {
            add_cell(&mut out, s.place(g, 0), v);
        }
    }
    Ok(out)
}

/// Heart slopes of each summand, placed: `(i, j, λ, multiplicity)`.
fn placed_slopes(s: &Summand, inv: &BlockInvariants) -> Result<Vec<(i64, i64, Q, u32)>> {
    let mut out = Vec::new();
    for (&g, heart) in &inv.hearts {
        let (i, j) = s.place(g, 0);
        for &(lambda, mu) in &heart.slopes {
            if lambda < Q::zero() || lambda >= Q::one() {
                return Err(InvError::Unsupported(format!(
                    "slope {lambda} of {} lies outside [0, 1)",
                    s.block.name()
                )));
            }
            out.push((i, j, lambda, mu));
        }
    }
    Ok(out)
}

/// `m^{i,j}`: each slope `λ` of the heart of `H^j(X)^i` contributes
/// `(1 - λ)` at `(i, j)` and `λ` at `(i + 1, j - 1)`.
pub fn slope_numbers(x: &FormalObject, trunc: Trunc) -> Result<BTreeMap<Cell, Q>> {
    slope_with(x, &mut BlockCache::new(trunc))
}

fn slope_with(x: &FormalObject, cache: &mut BlockCache) -> Result<BTreeMap<Cell, Q>> {
    let mut out: BTreeMap<Cell, Q> = BTreeMap::new();
    for s in x.summands() {
        for (i, j, lambda, mu) in placed_slopes(s, cache.get(&s.block)?)? {
            let mu = Q::from_integer(mu as i64);
            add_cell(&mut out, (i, j), (Q::one() - lambda) * mu);
            add_cell(&mut out, (i + 1, j - 1), lambda * mu);
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Newton slopes of `H^n(Tot X) ⊗ K` per total degree `n`.
fn newton_with(x: &FormalObject, cache: &mut BlockCache) -> Result<BTreeMap<i64, Polygon>> {
    let mut segs: BTreeMap<i64, Vec<(Q, Q)>> = BTreeMap::new();
    for s in x.summands() {
        for (i, j, lambda, mu) in placed_slopes(s, cache.get(&s.block)?)? {
            segs.entry(i + j).or_default().push((Q::from_integer(i) + lambda, Q::from_integer(mu as i64)));
        }
    }
    Ok(segs.into_iter().map(|(n, v)| (n, Polygon::new(v))).collect())
}

/// Polygon with slope `i` of length `m^{i, n-i}` for each total degree `n`.
pub fn newton_hodge_polygons(m: &BTreeMap<Cell, Q>) -> BTreeMap<i64, Polygon> {
    let mut segs: BTreeMap<i64, Vec<(Q, Q)>> = BTreeMap::new();
    for (&(i, j), &v) in m {
        segs.entry(i + j).or_default().push((Q::from_integer(i), v));
    }
    segs.into_iter().map(|(n, v)| (n, Polygon::new(v))).collect()
}

/// `R_n ⊗^L X` as a sum of three-term complexes, one per summand.
pub fn rn_tensor(x: &FormalObject, n: u32, trunc: Trunc) -> Result<TruncatedComplex> {
    let mut parts = Vec::new();
    for s in x.summands() {
        let (m, depth) = working_level(&s.block, trunc)?;
        let level = (m.max(n + 1), depth);
        parts.push(block_rn_complex(&s.block, n, level)?.with_shift(s.shift));
    }
    Ok(TruncatedComplex { parts })
}

pub fn r1_tensor(x: &FormalObject, trunc: Trunc) -> Result<TruncatedComplex> {
    rn_tensor(x, 1, trunc)
}

/// Each summand as a complex with grading `g` in degree `g`, shifted so that
/// cohomology lands in total degree `g - i_a - j_a`.
pub fn tot_complex(x: &FormalObject, trunc: Trunc) -> Result<TruncatedComplex> {
    let mut parts = Vec::new();
    for s in x.summands() {
        let level = working_level(&s.block, trunc)?;
        parts.push(block_tot_complex(&s.block, level)?.with_shift((0, s.shift.0 + s.shift.1)));
    }
    Ok(TruncatedComplex { parts })
}

/// Free rank and torsion of `H^n(Tot X)` over `W_m`, per degree `n`.
pub fn totalize(x: &FormalObject, trunc: Trunc) -> Result<BTreeMap<i64, TotCell>> {
    totalize_with(x, &mut BlockCache::new(trunc))
}

fn totalize_with(x: &FormalObject, cache: &mut BlockCache) -> Result<BTreeMap<i64, TotCell>> {
    let mut out: BTreeMap<i64, TotCell> = BTreeMap::new();
    for s in x.summands() {
        for (&g, cell) in &cache.get(&s.block)?.tot {
            let n = g - s.shift.0 - s.shift.1;
            let slot = out.entry(n).or_insert(TotCell { rank: 0, torsion: Vec::new() });
            slot.rank += cell.rank;
            slot.torsion.extend(&cell.torsion);
            slot.torsion.sort_unstable();
        }
    }
    Ok(out)
}

/// All numerical invariants of a formal object.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantTable {
    pub h: BTreeMap<Cell, u64>,
    pub h_w: BTreeMap<Cell, i64>,
    pub t: BTreeMap<Cell, u64>,
    pub m: BTreeMap<Cell, Q>,
    pub newton: BTreeMap<i64, Polygon>,
    pub newton_hodge: BTreeMap<i64, Polygon>,
    pub betti: BTreeMap<i64, u32>,
    pub tot_torsion: BTreeMap<i64, Vec<u32>>,
    /// Deepest truncation level used by any summand.
    pub level: (u32, u32),
}

fn get<V: Copy + Default>(map: &BTreeMap<Cell, V>, i: i64, j: i64) -> V {
    map.get(&(i, j)).copied().unwrap_or_default()
}

/// `m^{i,j} + T^{i,j} - 2T^{i-1,j+1} + T^{i-2,j+2}`, exactly.
pub fn hodge_witt_value(m: &BTreeMap<Cell, Q>, t: &BTreeMap<Cell, u64>, i: i64, j: i64) -> Q {
    let tt = |a: i64, b: i64| Q::from_integer(get(t, a, b) as i64);
    get(m, i, j) + tt(i, j) - tt(i - 1, j + 1) * 2 + tt(i - 2, j + 2)
}

/// The full table for `x`.
pub fn hodge_witt_numbers(x: &FormalObject, trunc: Trunc) -> Result<InvariantTable> {
    let mut cache = BlockCache::new(trunc);
    let h = hodge_with(x, &mut cache)?;
    let t = domino_with(x, &mut cache)?;
    let m = slope_with(x, &mut cache)?;
    let newton = newton_with(x, &mut cache)?;
    let tot = totalize_with(x, &mut cache)?;
    let mut level = (0, 0);
    for s in x.summands() {
        let l = cache.get(&s.block)?.level;
        level = (level.0.max(l.0), level.1.max(l.1));
    }
    let mut cells: Vec<Cell> = m.keys().copied().collect();
    for &(i, j) in t.keys() {
        cells.extend([(i, j), (i + 1, j - 1), (i + 2, j - 2)]);
    }
    let mut h_w = BTreeMap::new();
    for (i, j) in cells {
        let v = hodge_witt_value(&m, &t, i, j);
        if !v.is_integer() {
            return Err(InvError::NotIntegral { i, j, value: v.to_string() });
        }
        if !v.is_zero() {
            h_w.insert((i, j), v.to_integer());
        }
    }
    let newton_hodge = newton_hodge_polygons(&m);
    let betti = tot.iter().filter(|(_, c)| c.rank > 0).map(|(&n, c)| (n, c.rank)).collect();
    let tot_torsion = tot.into_iter().filter(|(_, c)| !c.torsion.is_empty()).map(|(n, c)| (n, c.torsion)).collect();
    Ok(InvariantTable { h, h_w, t, m, newton, newton_hodge, betti, tot_torsion, level })
}

impl InvariantTable {
    pub fn h(&self, i: i64, j: i64) -> u64 {
        get(&self.h, i, j)
    }
    pub fn hw(&self, i: i64, j: i64) -> i64 {
        get(&self.h_w, i, j)
    }
    pub fn t(&self, i: i64, j: i64) -> u64 {
        get(&self.t, i, j)
    }
    pub fn m(&self, i: i64, j: i64) -> Q {
        get(&self.m, i, j)
    }
    pub fn betti(&self, n: i64) -> u32 {
        self.betti.get(&n).copied().unwrap_or(0)
    }

    /// Columns `i` and total degrees with a nonzero entry in any table.
    pub fn support(&self) -> Vec<Cell> {
        let mut v: Vec<Cell> = self.h.keys().chain(self.h_w.keys()).chain(self.t.keys()).chain(self.m.keys()).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The `h_W` grid for `i, j >= 0`, `i + j <= bound`: rows `j` from top
    /// to bottom in decreasing order, columns `i` increasing.
    pub fn hw_grid(&self, bound: i64) -> Vec<Vec<i64>> {
        (0..=bound).rev().map(|j| (0..=bound - j).map(|i| self.hw(i, j)).collect()).collect()
    }

    pub fn to_markdown(&self, bound: i64) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "| j \\ i | {} |", (0..=bound).map(|i| i.to_string()).collect::<Vec<_>>().join(" | "));
        let _ = writeln!(s, "|---|{}", "---|".repeat(bound as usize + 1));
        for (row, j) in self.hw_grid(bound).into_iter().zip((0..=bound).rev()) {
            let mut cols: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            cols.resize(bound as usize + 1, String::new());
            let _ = writeln!(s, "| {j} | {} |", cols.join(" | "));
        }
        s
    }

    pub fn to_json(&self) -> TableJson {
        let cell = |(i, j): Cell| format!("{i},{j}");
        let poly = |p: &Polygon| p.segments.iter().map(|&(s, l)| (Num(s), Num(l))).collect();
        TableJson {
            h: self.h.iter().map(|(&k, &v)| (cell(k), v)).collect(),
            h_w: self.h_w.iter().map(|(&k, &v)| (cell(k), v)).collect(),
            t: self.t.iter().map(|(&k, &v)| (cell(k), v)).collect(),
            m: self.m.iter().map(|(&k, &v)| (cell(k), Num(v))).collect(),
            newton: self.newton.iter().map(|(n, p)| (n.to_string(), poly(p))).collect(),
            newton_hodge: self.newton_hodge.iter().map(|(n, p)| (n.to_string(), poly(p))).collect(),
            betti: self.betti.iter().map(|(n, &b)| (n.to_string(), b)).collect(),
            truncation: [self.level.0, self.level.1],
        }
    }
}

/// A rational printed as a JSON number when integral and as `"a/b"` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Num(pub Q);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            ser.serialize_i64(self.0.to_integer())
        } else {
            ser.serialize_str(&self.0.to_string())
        }
    }
}

/// JSON form of an [`InvariantTable`]; polygons are lists of `[slope, length]`.
#[derive(Clone, Debug, Serialize)]
pub struct TableJson {
    pub h: BTreeMap<String, u64>,
    #[serde(rename = "hW")]
    pub h_w: BTreeMap<String, i64>,
    #[serde(rename = "T")]
    pub t: BTreeMap<String, u64>,
    pub m: BTreeMap<String, Num>,
    pub newton: BTreeMap<String, Vec<(Num, Num)>>,
    #[serde(rename = "newtonHodge")]
    pub newton_hodge: BTreeMap<String, Vec<(Num, Num)>>,
    pub betti: BTreeMap<String, u32>,
    pub truncation: [u32; 2],
}
