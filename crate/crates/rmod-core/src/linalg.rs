//! Dense linear algebra over the chain ring `GR(p^M, r)`.
//!
//! Every nonzero element is `p^v` times a unit, so Smith normal form only
//! needs pivoting on minimal valuation. Submodules of `R^g` are given by
//! generator matrices (columns).

use witt_arith::{GaloisRing, Gr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Gr>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Gr::ZERO; rows * cols] }
    }

    pub fn identity(ring: &GaloisRing, n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn scalar(_ring: &GaloisRing, n: usize, c: Gr) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_int_rows(ring: &GaloisRing, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Mat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, ring.from_int(x));
            }
        }
        m
    }

    pub fn from_cols(rows: usize, cols: &[Vec<Gr>]) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gr {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Gr) {
        self.data[i * self.cols + j] = x;
    }

    pub fn col(&self, j: usize) -> Vec<Gr> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn cols_iter(&self) -> impl Iterator<Item = Vec<Gr>> + '_ {
        (0..self.cols).map(move |j| self.col(j))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn hcat_all(rows: usize, parts: &[&Mat]) -> Mat {
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut m = Mat::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hcat row mismatch");
            for i in 0..rows {
                for j in 0..p.cols {
                    m.set(i, off + j, p.get(i, j));
                }
            }
            off += p.cols;
        }
        m
    }

    /// Block diagonal sum.
    pub fn block_diag(parts: &[&Mat]) -> Mat {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Mat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for i in 0..p.rows {
                for j in 0..p.cols {
                    m.set(r0 + i, c0 + j, p.get(i, j));
                }
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        m
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn sub_block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.rows, idx.len());
        for (k, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, k, self.get(i, j));
            }
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, ring: &GaloisRing, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut m = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = m.get(i, j);
                    m.set(i, j, ring.add(cur, ring.mul(a, b)));
                }
            }
        }
        m
    }

    pub fn add(&self, ring: &GaloisRing, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ring.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, ring: &GaloisRing, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ring.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, ring: &GaloisRing, c: Gr) -> Mat {
        let data = self.data.iter().map(|&a| ring.mul(a, c)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, ring: &GaloisRing) -> Mat {
        let data = self.data.iter().map(|&a| ring.neg(a)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise `sigma^k`.
    pub fn sigma_pow(&self, ring: &GaloisRing, k: i64) -> Mat {
        if ring.r() == 1 || k.rem_euclid(ring.r() as i64) == 0 {
            return self.clone();
        }
        let data = self.data.iter().map(|&a| ring.sigma_pow(a, k)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn apply(&self, ring: &GaloisRing, v: &[Gr]) -> Vec<Gr> {
        assert_eq!(self.cols, v.len(), "apply shape mismatch");
        let mut out = vec![Gr::ZERO; self.rows];
        for (j, &x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = ring.add(*o, ring.mul(a, x));
                }
            }
        }
        out
    }

    /// Reduces every entry into the ring (used after changing precision).
    pub fn lift_into(&self, ring: &GaloisRing) -> Mat {
        let data = self.data.iter().map(|&a| ring.lift_from(a)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }
}

pub fn vec_sigma(ring: &GaloisRing, v: &[Gr], k: i64) -> Vec<Gr> {
    if ring.r() == 1 {
        return v.to_vec();
    }
    v.iter().map(|&a| ring.sigma_pow(a, k)).collect()
}

pub fn vec_add(ring: &GaloisRing, a: &[Gr], b: &[Gr]) -> Vec<Gr> {
    a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect()
}

pub fn vec_sub(ring: &GaloisRing, a: &[Gr], b: &[Gr]) -> Vec<Gr> {
    a.iter().zip(b).map(|(&x, &y)| ring.sub(x, y)).collect()
}

pub fn vec_scale(ring: &GaloisRing, a: &[Gr], c: Gr) -> Vec<Gr> {
    a.iter().map(|&x| ring.mul(x, c)).collect()
}

/// Smith normal form `P A Q = D` with `D` diagonal, entries `p^{vals[k]}`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub vals: Vec<u32>,
    pub p: Option<Mat>,
    pub p_inv: Option<Mat>,
    pub q: Option<Mat>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Want {
    pub p: bool,
    pub p_inv: bool,
    pub q: bool,
}

impl Want {
    pub const NONE: Want = Want { p: false, p_inv: false, q: false };
    pub const ALL: Want = Want { p: true, p_inv: true, q: true };
}

pub fn snf(ring: &GaloisRing, a: &Mat, want: Want) -> Snf {
    let (rows, cols) = (a.rows, a.cols);
    let big = ring.precision();
    let mut w = a.clone();
    let mut p = want.p.then(|| Mat::identity(ring, rows));
    let mut p_inv = want.p_inv.then(|| Mat::identity(ring, rows));
    let mut q = want.q.then(|| Mat::identity(ring, cols));
    let mut vals = Vec::new();
    let mut valcache: Vec<u32> = w.data.iter().map(|&x| ring.valuation(x)).collect();
    let kmax = rows.min(cols);
    for k in 0..kmax {
        // pivot of minimal valuation in the trailing block
        let mut best = (big, 0, 0);
        'search: for i in k..rows {
            for j in k..cols {
                let v = valcache[i * cols + j];
                if v < best.0 {
                    best = (v, i, j);
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let (v, pi, pj) = best;
        if v >= big {
            break;
        }
        if pi != k {
            swap_rows(&mut w, pi, k);
            swap_rows_cache(&mut valcache, cols, pi, k);
            if let Some(p) = p.as_mut() {
                swap_rows(p, pi, k);
            }
            if let Some(pi_m) = p_inv.as_mut() {
                swap_cols(pi_m, pi, k);
            }
        }
        if pj != k {
            swap_cols(&mut w, pj, k);
            for i in 0..rows {
                valcache.swap(i * cols + pj, i * cols + k);
            }
            if let Some(q) = q.as_mut() {
                swap_cols(q, pj, k);
            }
        }
        // normalise the pivot to p^v by scaling column k with u^{-1}
        let (_, u) = ring.unit_part(w.get(k, k)).expect("pivot nonzero");
        let uinv = ring.inv(u).expect("unit");
        if uinv != ring.one() {
            for i in 0..rows {
                let x = w.get(i, k);
                if !x.is_zero() {
                    w.set(i, k, ring.mul(x, uinv));
                }
            }
            if let Some(q) = q.as_mut() {
                for i in 0..cols {
                    let x = q.get(i, k);
                    q.set(i, k, ring.mul(x, uinv));
                }
            }
        }
        // clear column k below the pivot
        for i in k + 1..rows {
            let x = w.get(i, k);
            if x.is_zero() {
                continue;
            }
            let c = ring.div_p_pow(x, v);
            for j in k..cols {
                let y = w.get(k, j);
                if !y.is_zero() {
                    let nv = ring.sub(w.get(i, j), ring.mul(c, y));
                    w.set(i, j, nv);
                    valcache[i * cols + j] = ring.valuation(nv);
                }
            }
            w.set(i, k, Gr::ZERO);
            valcache[i * cols + k] = big;
            if let Some(p) = p.as_mut() {
                for j in 0..rows {
                    let y = p.get(k, j);
                    if !y.is_zero() {
                        p.set(i, j, ring.sub(p.get(i, j), ring.mul(c, y)));
                    }
                }
            }
            if let Some(pi_m) = p_inv.as_mut() {
                // P^{-1} <- P^{-1} (I + c e_i e_k^T): column k += c * column i
                for j in 0..rows {
                    let y = pi_m.get(j, i);
                    if !y.is_zero() {
                        pi_m.set(j, k, ring.add(pi_m.get(j, k), ring.mul(c, y)));
                    }
                }
            }
        }
        // clear row k right of the pivot; only the pivot row changes in w
        for j in k + 1..cols {
            let x = w.get(k, j);
            if x.is_zero() {
                continue;
            }
            let c = ring.div_p_pow(x, v);
            w.set(k, j, Gr::ZERO);
            valcache[k * cols + j] = big;
            if let Some(q) = q.as_mut() {
                for i in 0..cols {
                    let y = q.get(i, k);
                    if !y.is_zero() {
                        q.set(i, j, ring.sub(q.get(i, j), ring.mul(c, y)));
                    }
                }
            }
        }
        vals.push(v);
    }
    Snf { vals, p, p_inv, q }
}

fn swap_rows(m: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

fn swap_rows_cache(c: &mut [u32], cols: usize, a: usize, b: usize) {
    for j in 0..cols {
        c.swap(a * cols + j, b * cols + j);
    }
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        m.data.swap(i * m.cols + a, i * m.cols + b);
    }
}

/// Length of `R^g / span(gens)`, in units of the residue field.
pub fn quotient_length(ring: &GaloisRing, g: usize, gens: &Mat) -> u64 {
    if g == 0 {
        return 0;
    }
    let s = snf(ring, gens, Want::NONE);
    let big = ring.precision() as u64;
    s.vals.iter().map(|&v| v as u64).sum::<u64>() + big * (g - s.vals.len()) as u64
}

/// Generators of `{x : A x = 0}`.
pub fn nullspace(ring: &GaloisRing, a: &Mat) -> Mat {
    let s = snf(ring, a, Want { q: true, ..Want::NONE });
    let q = s.q.expect("requested");
    let big = ring.precision();
    let mut gens = Vec::new();
    for (k, &v) in s.vals.iter().enumerate() {
        if v > 0 {
            let c = ring.p_pow(big - v);
            gens.push(q.col(k).into_iter().map(|x| ring.mul(x, c)).collect::<Vec<_>>());
        }
    }
    for k in s.vals.len()..a.cols {
        gens.push(q.col(k));
    }
    Mat::from_cols(a.cols, &gens)
}

/// Some `x` with `A x = b`, if one exists.
pub fn solve(ring: &GaloisRing, a: &Mat, b: &[Gr]) -> Option<Vec<Gr>> {
    let s = snf(ring, a, Want { p: true, q: true, ..Want::NONE });
    solve_with(ring, &s, a.cols, b)
}

pub fn solve_with(ring: &GaloisRing, s: &Snf, cols: usize, b: &[Gr]) -> Option<Vec<Gr>> {
    let pb = s.p.as_ref().expect("P requested").apply(ring, b);
    let mut y = vec![Gr::ZERO; cols];
    for (k, &x) in pb.iter().enumerate() {
        if k < s.vals.len() {
            let v = s.vals[k];
            if ring.valuation(x) < v {
                return None;
            }
            y[k] = ring.div_p_pow(x, v);
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(s.q.as_ref().expect("Q requested").apply(ring, &y))
}

/// Membership test for a submodule given by generators.
pub fn in_span(ring: &GaloisRing, gens: &Mat, b: &[Gr]) -> bool {
    if b.iter().all(|x| x.is_zero()) {
        return true;
    }
    solve(ring, gens, b).is_some()
}

/// A matrix `Π` with `Π c = 0` exactly when `c` lies in the span of `gens`.
pub fn membership_projector(ring: &GaloisRing, dim: usize, gens: &Mat) -> Mat {
    if gens.cols() == 0 {
        return Mat::identity(ring, dim);
    }
    let s = snf(ring, gens, Want { p: true, ..Want::NONE });
    let mut pm = s.p.expect("requested");
    let big = ring.precision();
    for k in 0..dim {
        let v = s.vals.get(k).copied().unwrap_or(big);
        let c = ring.p_pow(big - v);
        for j in 0..dim {
            let x = pm.get(k, j);
            pm.set(k, j, ring.mul(x, c));
        }
    }
    pm
}

/// A subquotient `S / T` of `R^g`, normalised to `⊕ R/p^{e_k}`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    /// Representatives of the cyclic generators, as ambient vectors.
    basis: Mat,
    exps: Vec<u32>,
    /// Basis expressed through the numerator generator columns.
    gen_combo: Mat,
    p1: Mat,
    dvals: Vec<u32>,
    p2: Mat,
    keep: Vec<usize>,
}

impl Subquotient {
    /// `num` and `den` are generator matrices with `ambient` rows; `den` need
    /// not lie in `num`, the numerator is enlarged to `num + den`.
    pub fn new(ring: &GaloisRing, num: &Mat, den: &Mat) -> Self {
        let ambient = num.rows.max(den.rows);
        let s = if den.cols == 0 {
            num.clone()
        } else if num.cols == 0 {
            den.clone()
        } else {
            num.hcat(den)
        };
        let s = if s.rows == 0 { Mat::zeros(ambient, s.cols) } else { s };
        let snf1 = snf(ring, &s, Want { p: true, q: true, ..Want::NONE });
        let p1 = snf1.p.clone().expect("requested");
        let q1 = snf1.q.clone().expect("requested");
        let big = ring.precision();
        let l = snf1.vals.len();
        let dvals = snf1.vals.clone();
        // coordinates of den in terms of s_l = p^{d_l} P1^{-1} e_l
        let mut n_cols: Vec<Vec<Gr>> = Vec::new();
        for (k, &d) in dvals.iter().enumerate() {
            let mut c = vec![Gr::ZERO; l];
            c[k] = ring.p_pow(big - d);
            n_cols.push(c);
        }
        for j in 0..den.cols {
            let x = p1.apply(ring, &den.col(j));
            let c: Vec<Gr> = (0..l).map(|k| ring.div_p_pow(x[k], dvals[k])).collect();
            n_cols.push(c);
        }
        let nmat = Mat::from_cols(l, &n_cols);
        let snf2 = snf(ring, &nmat, Want { p: true, p_inv: true, ..Want::NONE });
        let p2 = snf2.p.expect("requested");
        let p2_inv = snf2.p_inv.expect("requested");
        let mut keep = Vec::new();
        let mut exps = Vec::new();
        for k in 0..l {
            let e = snf2.vals.get(k).copied().unwrap_or(big);
            if e > 0 {
                keep.push(k);
                exps.push(e);
            }
        }
        // s_l = S Q1 e_l, so basis_k = S Q1[:, :l] P2^{-1} e_k
        let q1l = q1.sub_block(0, q1.rows, 0, l);
        let combo_all = q1l.mul(ring, &p2_inv);
        let gen_combo = combo_all.select_cols(&keep);
        let basis = s.mul(ring, &gen_combo);
        // only the numerator columns carry meaning for callers; den columns are
        // folded into the numerator and keep their own coefficients
        Subquotient { ambient, basis, exps, gen_combo, p1, dvals, p2, keep }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }
    pub fn basis(&self) -> &Mat {
        &self.basis
    }
    pub fn num_gens(&self) -> usize {
        self.exps.len()
    }
    /// Coefficients of the basis in terms of the columns of `[num | den]`.
    pub fn gen_combo(&self) -> &Mat {
        &self.gen_combo
    }
    pub fn length(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    /// Coordinates of `x` in the normalised basis, `None` if `x` is not in the numerator.
    pub fn coords(&self, ring: &GaloisRing, x: &[Gr]) -> Option<Vec<Gr>> {
        let px = self.p1.apply(ring, x);
        let l = self.dvals.len();
        let mut c = vec![Gr::ZERO; l];
        for (k, &v) in px.iter().enumerate() {
            if k < l {
                if ring.valuation(v) < self.dvals[k] {
                    return None;
                }
                c[k] = ring.div_p_pow(v, self.dvals[k]);
            } else if !v.is_zero() {
                return None;
            }
        }
        let z = self.p2.apply(ring, &c);
        Some(
            self.keep
                .iter()
                .zip(&self.exps)
                .map(|(&k, &e)| ring.reduce(z[k], e))
                .collect(),
        )
    }

    /// Whether `x` (in the numerator) is zero in the quotient.
    pub fn is_zero_class(&self, ring: &GaloisRing, x: &[Gr]) -> Option<bool> {
        self.coords(ring, x).map(|c| c.iter().all(|v| v.is_zero()))
    }

    /// Matrix of the map induced by `f` into `target`, column `k` being the
    /// coordinates of `f(basis_k)`.
    pub fn induced(
        &self,
        ring: &GaloisRing,
        target: &Subquotient,
        f: impl Fn(&[Gr]) -> Vec<Gr>,
    ) -> Option<Mat> {
        let mut cols = Vec::with_capacity(self.num_gens());
        for k in 0..self.num_gens() {
            let y = f(&self.basis.col(k));
            cols.push(target.coords(ring, &y)?);
        }
        Some(Mat::from_cols(target.num_gens(), &cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(m: u32) -> GaloisRing {
        GaloisRing::new(3, 1, m).unwrap()
    }

    #[test]
    fn snf_reconstructs() {
        let r = ring(4);
        let a = Mat::from_int_rows(&r, &[vec![3, 6, 9], vec![9, 1, 0], vec![27, 3, 18]]);
        let s = snf(&r, &a, Want::ALL);
        let (p, pi, q) = (s.p.unwrap(), s.p_inv.unwrap(), s.q.unwrap());
        assert_eq!(p.mul(&r, &pi), Mat::identity(&r, 3));
        let d = p.mul(&r, &a).mul(&r, &q);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j && i < s.vals.len() { r.p_pow(s.vals[i]) } else { Gr::ZERO };
                assert_eq!(d.get(i, j), expect);
            }
        }
    }

    #[test]
    fn quotient_lengths() {
        let r = ring(3);
        // Z/27 / (9) has length 2
        let a = Mat::from_int_rows(&r, &[vec![9]]);
        assert_eq!(quotient_length(&r, 1, &a), 2);
        assert_eq!(quotient_length(&r, 2, &a), 5);
    }

    #[test]
    fn nullspace_and_solve() {
        let r = ring(3);
        let a = Mat::from_int_rows(&r, &[vec![3, 0], vec![0, 1]]);
        let n = nullspace(&r, &a);
        for c in n.cols_iter() {
            assert!(a.apply(&r, &c).iter().all(|x| x.is_zero()));
        }
        // kernel is 9 Z/27 + 0: length 1
        assert_eq!(quotient_length(&r, 2, &n), 5);
        assert!(solve(&r, &a, &[r.from_int(6), r.from_int(2)]).is_some());
        assert!(solve(&r, &a, &[r.from_int(1), r.from_int(2)]).is_none());
    }

    #[test]
    fn subquotient_coordinates() {
        let r = ring(3);
        // S = R^2, T = span((3, 0), (0, 9)) -> Z/3 + Z/9
        let num = Mat::identity(&r, 2);
        let den = Mat::from_int_rows(&r, &[vec![3, 0], vec![0, 9]]);
        let sq = Subquotient::new(&r, &num, &den);
        let mut e = sq.exps().to_vec();
        e.sort();
        assert_eq!(e, vec![1, 2]);
        assert_eq!(sq.is_zero_class(&r, &[r.from_int(3), r.from_int(9)]), Some(true));
        assert_eq!(sq.is_zero_class(&r, &[r.from_int(0), r.from_int(3)]), Some(false));
        for k in 0..sq.num_gens() {
            let c = sq.coords(&r, &sq.basis().col(k)).unwrap();
            for (l, x) in c.iter().enumerate() {
                assert_eq!(*x, if l == k { r.one() } else { Gr::ZERO });
            }
        }
    }
}
