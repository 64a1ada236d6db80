//! Rows 0 and 1 of the first page for `Bα_p`, presented by the simplicial
//! scheme `[n] ↦ E^n × E^{(1)}` with `α_p = ker(g: E → E^{(1)})`.
//!
//! Column `n` of row 1 is `H̃^1(E)^n ⊕ H̃^1(E^{(1)})`; the differential is the
//! alternating sum of the pullbacks along the face maps, with `g^*` acting as
//! right multiplication by `F` on `E_{1/2}`. Everything is materialized at a
//! truncation and the cohomology is the stable image of the fine kernel.

use std::collections::BTreeMap;

use rmod_core::linalg::{membership_projector, nullspace};
use rmod_core::{make_block, BlockKind, BlockModule, FormalObject, Mat, SemiMap, Tgm};
use star::{candidates, identify, Identified};

use crate::error::{BalphapError, Result};
use crate::kunneth::simplicial_column;

/// Extra precision and depth of the level at which kernels are taken.
pub const FINE: (u32, u32) = (2, 4);

/// `id · 1 + g · g^*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Coef {
    pub id: i64,
    pub g: i64,
}

impl Coef {
    const ZERO: Coef = Coef { id: 0, g: 0 };
    const ONE: Coef = Coef { id: 1, g: 0 };
    const G: Coef = Coef { id: 0, g: 1 };

    fn add(self, o: Coef) -> Coef {
        Coef { id: self.id + o.id, g: self.g + o.g }
    }

    fn scale(self, c: i64) -> Coef {
        Coef { id: self.id * c, g: self.g * c }
    }
}

/// Rows are output coordinates, columns input coordinates.
pub type CoefMat = Vec<Vec<Coef>>;

/// `f_i : E^n × E^{(1)} → E^{n-1} × E^{(1)}` on points, coordinates
/// `(a_0, ..., a_{n-1}, b)`.
pub fn face_map(n: usize, i: usize) -> CoefMat {
    assert!(n >= 1 && i <= n, "face map f_{i} on column {n}");
    let mut m = vec![vec![Coef::ZERO; n + 1]; n];
    let b_out = n - 1;
    for (k, row) in m.iter_mut().enumerate().take(n - 1) {
        if i == 0 || k >= i {
            row[k + 1] = Coef::ONE;
        } else if k + 1 == i && i < n {
            row[k] = Coef::ONE;
            row[k + 1] = Coef::ONE;
        } else {
            row[k] = Coef::ONE;
        }
    }
    m[b_out][n] = Coef::ONE;
    if i == n {
        m[b_out][n - 1] = Coef::G;
    }
    m
}

/// The differential from column `column - 1` to column `column` of row
/// `row`, as the alternating sum of face pullbacks.
pub fn row01_alternating_maps(row: u32, column: usize) -> Result<CoefMat> {
    if column == 0 {
        return Err(BalphapError::Unsupported("column 0 has no incoming differential".into()));
    }
    let sign = |i: usize| if i.is_multiple_of(2) { 1 } else { -1 };
    match row {
        0 => {
            let s: i64 = (0..=column).map(sign).sum();
            Ok(vec![vec![Coef::ONE.scale(s)]])
        }
        1 => {
            let mut out = vec![vec![Coef::ZERO; column]; column + 1];
            for i in 0..=column {
                let f = face_map(column, i);
                // pullback on H^1 is the transpose, with g replaced by g^*
                for (r, frow) in f.iter().enumerate() {
                    for (c, &x) in frow.iter().enumerate() {
                        out[c][r] = out[c][r].add(x.scale(sign(i)));
                    }
                }
            }
            Ok(out)
        }
        _ => Err(BalphapError::Unsupported(format!("row {row} has no closed-form differential"))),
    }
}

/// `copies` copies of `t`, with block-diagonal operators.
pub fn power(t: &Tgm, copies: usize) -> Tgm {
    let ring = t.ring().clone();
    let mut out = Tgm::new(ring.clone(), t.depth());
    for g in t.gradings() {
        let labels = (0..copies).flat_map(|c| t.labels(g).iter().map(move |l| format!("{l}#{c}"))).collect();
        let rel = t.rel(g);
        out.add_grading(g, labels, Mat::block_diag(&vec![&rel; copies]));
    }
    for g in t.gradings() {
        let (f, v) = (t.f_map(g), t.v_map(g));
        out.set_f_map(g, SemiMap::new(Mat::block_diag(&vec![&f.mat; copies]), f.twist));
        out.set_v_map(g, SemiMap::new(Mat::block_diag(&vec![&v.mat; copies]), v.twist));
        if t.dim(g + 1) > 0 {
            out.set_d(g, Mat::block_diag(&vec![&t.d_mat(g); copies]));
        }
    }
    out.close_truncation();
    out
}

/// A differential between powers of `t`: the block `(r, c)` is
/// `id · 1 + g · G` with `G` the matrix of `g^*` in each grading.
fn materialize(t: &Tgm, g_star: &BTreeMap<i64, Mat>, coefs: &CoefMat) -> BTreeMap<i64, Mat> {
    let ring = t.ring();
    let mut out = BTreeMap::new();
    for g in t.gradings() {
        let d = t.dim(g);
        let rows = coefs.len();
        let cols = coefs.first().map_or(0, Vec::len);
        let mut m = Mat::zeros(rows * d, cols * d);
        let id = Mat::identity(ring, d);
        for (r, row) in coefs.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                let mut blk = id.scale(ring, ring.from_int(x.id));
                if x.g != 0 {
                    blk = blk.add(ring, &g_star[&g].scale(ring, ring.from_int(x.g)));
                }
                m.put(r * d, c * d, &blk);
            }
        }
        out.insert(g, m);
    }
    out
}

/// One row of the first page, materialized at a fine level.
#[derive(Clone, Debug)]
pub struct MaterialRow {
    pub row: u32,
    pub block: BlockModule,
    pub level: (u32, u32),
    /// Columns at the fine level.
    pub columns: Vec<Tgm>,
    /// `maps[n]` goes from column `n` to column `n + 1`, per grading.
    pub maps: Vec<BTreeMap<i64, Mat>>,
}

/// The block whose powers make up row `row`: `W` for row 0, `E_{1/2}` for row 1.
fn row_block(p: u64, row: u32) -> Result<BlockModule> {
    let kind = match row {
        0 => BlockKind::UnitW,
        1 => BlockKind::Dieudonne { i: 1, j: 1 },
        _ => return Err(BalphapError::Unsupported(format!("row {row}"))),
    };
    Ok(make_block(kind, p, 1)?)
}

/// Columns `0..=last` of row `row` at truncation `(m, n)`.
pub fn material_row(p: u64, row: u32, last: usize, m: u32, n: u32) -> Result<MaterialRow> {
    let block = row_block(p, row)?;
    let (mf, nf) = (m + FINE.0, n + FINE.1);
    let base = block.truncate(mf, nf)?;
    // right multiplication by F agrees with F on a cyclic module over the
    // commutative ring W[F, V] when r = 1
    let g_star: BTreeMap<i64, Mat> = base.gradings().into_iter().map(|g| (g, base.f_map(g).mat)).collect();
    let mut columns = Vec::with_capacity(last + 1);
    for col in 0..=last {
        let table = simplicial_column(p, col)?;
        let terms = table.get(&(row as i64)).cloned().unwrap_or_default();
        for t in &terms {
            let obj = t.resolve(p)?;
            if obj.summands()[0].block != block || t.shift != (0, 0) {
                return Err(BalphapError::Unsupported(format!("unexpected Künneth term {} in row {row}", t.name())));
            }
        }
        columns.push(power(&base, terms.len()));
    }
    let mut maps = Vec::with_capacity(last);
    for (col, target) in columns.iter().enumerate().skip(1) {
        let coefs = row01_alternating_maps(row, col)?;
        if coefs.len() != target.dim(0) / base.dim(0).max(1) {
            return Err(BalphapError::NotAComplex(format!("column {col} size mismatch")));
        }
        maps.push(materialize(&base, &g_star, &coefs));
    }
    Ok(MaterialRow { row, block, level: (m, n), columns, maps })
}

impl MaterialRow {
    fn coarse(&self, col: usize) -> Tgm {
        self.columns[col].quotient(self.level.0, self.level.1)
    }

    /// Whether consecutive differentials compose to zero in the truncation.
    pub fn is_complex(&self) -> bool {
        for k in 1..self.maps.len() {
            let target = &self.columns[k + 1];
            for (g, a) in &self.maps[k - 1] {
                let ring = target.ring();
                let comp = self.maps[k][g].mul(ring, a);
                if !comp.cols_iter().all(|c| target.is_zero_in(*g, &c)) {
                    return false;
                }
            }
        }
        true
    }

    /// Cohomology at column `col`, which must have an outgoing map.
    pub fn cohomology(&self, col: usize) -> Result<Tgm> {
        if col >= self.maps.len() {
            return Err(BalphapError::Unsupported(format!("column {col} has no outgoing map")));
        }
        let src = &self.columns[col];
        let dst = &self.columns[col + 1];
        let ring = src.ring().clone();
        let mut num = BTreeMap::new();
        let mut den = BTreeMap::new();
        for g in src.gradings() {
            let pi = membership_projector(&ring, dst.dim(g), &dst.rel(g));
            let z = nullspace(&ring, &pi.mul(&ring, &self.maps[col][&g]));
            let b = if col > 0 { self.maps[col - 1][&g].clone() } else { Mat::zeros(src.dim(g), 0) };
            num.insert(g, z.hcat(&b));
            den.insert(g, b);
        }
        let (h, _) = self.coarse(col).subquotient(&num, &den)?;
        Ok(h)
    }
}

/// A cell of the second page: the identified module and, when named, the
/// corresponding formal object.
#[derive(Clone, Debug)]
pub struct E2Cell {
    pub found: Identified,
    pub object: FormalObject,
}

impl E2Cell {
    pub fn zero(p: u64) -> Self {
        let ring = rmod_core::GaloisRing::new(p, 1, 1).expect("valid prime");
        E2Cell { found: Identified { module: Tgm::new(ring, 1), block: None }, object: FormalObject::empty(p, 1) }
    }

    pub fn name(&self) -> String {
        if self.object.is_empty() {
            return "0".into();
        }
        self.object.summands().iter().map(shifted_name).collect::<Vec<_>>().join(" + ")
    }
}

pub fn shifted_name(s: &rmod_core::Summand) -> String {
    let mut n = s.twisted_name();
    if s.shift.1 != 0 {
        n.push_str(&format!("[{}]", s.shift.1));
    }
    n
}

/// Names the module with a block from the candidate list.
pub fn to_cell(found: Identified, cands: &[BlockModule]) -> Result<E2Cell> {
    let p = found.module.p();
    if found.is_zero() {
        return Ok(E2Cell { found, object: FormalObject::empty(p, 1) });
    }
    let Some((name, _)) = &found.block else {
        return Err(BalphapError::Failed("a cohomology module matched none of the candidate blocks".into()));
    };
    let block = cands.iter().find(|c| &c.name() == name).cloned().ok_or_else(|| BalphapError::Unresolved(name.clone()))?;
    Ok(E2Cell { object: FormalObject::single(block), found })
}

/// `E_2^{a, row}` for `a ≤ last`, at truncation `(m, n)`.
pub fn e2_row(p: u64, row: u32, last: usize, m: u32, n: u32) -> Result<BTreeMap<(i64, i64), E2Cell>> {
    let mr = material_row(p, row, last + 1, m, n)?;
    if !mr.is_complex() {
        return Err(BalphapError::NotAComplex(format!("row {row}")));
    }
    let cands = candidates(p, std::slice::from_ref(&mr.block))?;
    let mut out = BTreeMap::new();
    for a in 0..=last {
        let h = mr.cohomology(a)?;
        out.insert((a as i64, row as i64), to_cell(identify(&h, &cands), &cands)?);
    }
    Ok(out)
}

/// Rows 0 and 1 of the second page for columns `0..=last`.
pub fn e2_rows01(p: u64, last: usize, m: u32, n: u32) -> Result<BTreeMap<(i64, i64), E2Cell>> {
    let mut out = e2_row(p, 0, last, m, n)?;
    out.extend(e2_row(p, 1, last, m, n)?);
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn c(id: i64, g: i64) -> Coef {
        Coef { id, g }
    }

    #[test]
    fn row_zero_alternates() {
        let vals: Vec<i64> = (1..=4).map(|n| row01_alternating_maps(0, n).unwrap()[0][0].id).collect();
        assert_eq!(vals, vec![0, 1, 0, 1]);
    }

    #[test]
    fn row_one_low_columns() {
        // y ↦ (-g^* y, 0)
        assert_eq!(row01_alternating_maps(1, 1).unwrap(), vec![vec![c(0, -1)], vec![c(0, 0)]]);
        // (x_0, y) ↦ (0, g^* y, y)
        assert_eq!(
            row01_alternating_maps(1, 2).unwrap(),
            vec![vec![c(0, 0), c(0, 0)], vec![c(0, 0), c(0, 1)], vec![c(0, 0), c(1, 0)]]
        );
    }

    #[test]
    fn row_one_odd_column() {
        // (x_0, x_1, y) ↦ (-x_0, 0, x_1 - g^* y, 0)
        let z = c(0, 0);
        assert_eq!(
            row01_alternating_maps(1, 3).unwrap(),
            vec![vec![c(-1, 0), z, z], vec![z, z, z], vec![z, c(1, 0), c(0, -1)], vec![z, z, z]]
        );
    }
}
