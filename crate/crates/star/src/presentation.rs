//! The star product `M ⋆ N` of two truncated modules by generators and
//! relations.
//!
//! In total grading `g` the ambient has generators `X_s(a, b) = V^s(m_a ⋆ n_b)`
//! for `0 <= s < n` and `Y_s(a, b) = dV^s(m_a ⋆ n_b)` for `0 < s < n`, the
//! latter indexed by pairs of grading `g - 1`. The relations are generated by
//! the relations of `M` and `N`, by `(Vm) ⋆ n = V(m ⋆ Fn)`,
//! `m ⋆ (Vn) = V(Fm ⋆ n)` and `Vd = p dV`, and then saturated under `V` and `d`.

use std::collections::BTreeMap;

use rmod_core::linalg::quotient_length;
use rmod_core::{BlockModule, GaloisRing, GradedMap, Gr, Mat, SemiMap, Tgm};

use crate::error::{Result, StarError};
use crate::grid::{reduce_span, sign, unit, Grid};

/// Saturation rounds allowed per unit of V-depth.
const ROUNDS_PER_DEPTH: usize = 4;

/// `M ⋆ N` at V-depth `n`, with the index data needed to map out of it.
#[derive(Clone, Debug)]
pub struct StarPresentation {
    pub module: Tgm,
    pub left: Tgm,
    pub right: Tgm,
    pub grid: Grid,
    pub depth: u32,
}

impl StarPresentation {
    /// Index of `X_s(pair k)` in grading `g`.
    pub fn x_index(&self, g: i64, s: u32, k: usize) -> usize {
        s as usize * self.grid.count(g) + k
    }

    /// Index of `Y_s(pair k of grading g - 1)` in grading `g`, for `s >= 1`.
    pub fn y_index(&self, g: i64, s: u32, k: usize) -> usize {
        self.depth as usize * self.grid.count(g) + (s as usize - 1) * self.grid.count(g - 1) + k
    }
}

fn check_twists(t: &Tgm, what: &str) -> Result<()> {
    for g in t.gradings() {
        if t.f_map(g).twist != 1 || t.v_map(g).twist != -1 {
            return Err(StarError::Unsupported(format!("{what}: F and V must be sigma and sigma^-1 semilinear")));
        }
    }
    Ok(())
}

fn same_ring(a: &Tgm, b: &Tgm) -> Result<()> {
    let (ra, rb) = (a.ring(), b.ring());
    if ra.p() != rb.p() || ra.r() != rb.r() || ra.precision() != rb.precision() {
        return Err(StarError::Unsupported("factors live over different coefficient rings".into()));
    }
    Ok(())
}

/// `M ⋆ N` for two truncations at the same precision, cut at V-depth `n`.
pub fn star_presentation(m: &Tgm, n_mod: &Tgm, n: u32) -> Result<StarPresentation> {
    same_ring(m, n_mod)?;
    check_twists(m, "left factor")?;
    check_twists(n_mod, "right factor")?;
    if n == 0 {
        return Err(StarError::Unsupported("V-depth must be positive".into()));
    }
    let ring = m.ring().clone();
    let grid = Grid::new(m, n_mod);
    let mut gs: Vec<i64> = grid.gradings().into_iter().flat_map(|g| [g, g + 1]).collect();
    gs.sort_unstable();
    gs.dedup();
    let mut out = StarPresentation { module: Tgm::new(ring.clone(), n), left: m.clone(), right: n_mod.clone(), grid, depth: n };
    let dims: BTreeMap<i64, usize> = gs
        .iter()
        .map(|&g| (g, n as usize * out.grid.count(g) + (n as usize - 1) * out.grid.count(g - 1)))
        .collect();
    let mut amb = Tgm::new(ring.clone(), n);
    for &g in &gs {
        let mut labels = Vec::with_capacity(dims[&g]);
        for s in 0..n {
            for &(ga, a, gb, b) in &out.grid.pairs.get(&g).cloned().unwrap_or_default() {
                labels.push(format!("V^{s}({}*{})", m.labels(ga)[a], n_mod.labels(gb)[b]));
            }
        }
        for s in 1..n {
            for &(ga, a, gb, b) in &out.grid.pairs.get(&(g - 1)).cloned().unwrap_or_default() {
                labels.push(format!("dV^{s}({}*{})", m.labels(ga)[a], n_mod.labels(gb)[b]));
            }
        }
        amb.add_grading(g, labels, Mat::zeros(dims[&g], 0));
    }
    out.module = amb;
    set_operators(&mut out, &ring, &dims)?;
    let base = base_relations(&out, &ring, &dims);
    let rel = saturate(&out.module, &ring, &dims, base, n)?;
    for &g in &gs {
        let labels = out.module.labels(g).to_vec();
        out.module.add_grading(g, labels, rel[&g].clone());
    }
    Ok(out)
}

/// `d(m_a ⋆ n_b)` written on `X_0` of grading `g + 1`, added into `col`.
fn add_d_x0(sp: &StarPresentation, ring: &GaloisRing, col: &mut [Gr], pair: (i64, usize, i64, usize), c: Gr) {
    let (ga, a, gb, b) = pair;
    let (m, n) = (&sp.left, &sp.right);
    if m.dim(ga + 1) > 0 {
        let dm = m.apply_d(ga, &unit(ring, m.dim(ga), a));
        sp.grid.add_tensor(ring, col, 0, ga + 1, &dm, gb, &unit(ring, n.dim(gb), b), c);
    }
    if n.dim(gb + 1) > 0 {
        let dn = n.apply_d(gb, &unit(ring, n.dim(gb), b));
        let c2 = ring.mul(c, sign(ring, ga));
        sp.grid.add_tensor(ring, col, 0, ga, &unit(ring, m.dim(ga), a), gb + 1, &dn, c2);
    }
}

fn set_operators(sp: &mut StarPresentation, ring: &GaloisRing, dims: &BTreeMap<i64, usize>) -> Result<()> {
    let n = sp.depth;
    let p = ring.p_pow(1);
    let one = ring.one();
    let mut fs = BTreeMap::new();
    let mut vs = BTreeMap::new();
    let mut ds = BTreeMap::new();
    for (&g, &dim) in dims {
        let mut f = Mat::zeros(dim, dim);
        let mut v = Mat::zeros(dim, dim);
        let up = dims.get(&(g + 1)).copied().unwrap_or(0);
        let mut d = Mat::zeros(up, dim);
        let here = sp.grid.pairs.get(&g).cloned().unwrap_or_default();
        for (k, &(ga, a, gb, b)) in here.iter().enumerate() {
            // F(X_0) = F m ⋆ F n
            let fm = sp.left.f_map(ga).mat.col(a);
            let fn_ = sp.right.f_map(gb).mat.col(b);
            let mut col = vec![Gr::ZERO; dim];
            sp.grid.add_tensor(ring, &mut col, 0, ga, &fm, gb, &fn_, one);
            for (i, x) in col.into_iter().enumerate() {
                f.set(i, sp.x_index(g, 0, k), x);
            }
            for s in 1..n {
                f.set(sp.x_index(g, s - 1, k), sp.x_index(g, s, k), p);
            }
            for s in 0..n.saturating_sub(1) {
                v.set(sp.x_index(g, s + 1, k), sp.x_index(g, s, k), one);
            }
            if up > 0 {
                let mut col = vec![Gr::ZERO; up];
                add_d_x0(sp, ring, &mut col, (ga, a, gb, b), one);
                for (i, x) in col.into_iter().enumerate() {
                    d.set(i, sp.x_index(g, 0, k), x);
                }
                for s in 1..n {
                    d.set(sp.y_index(g + 1, s, k), sp.x_index(g, s, k), one);
                }
            }
        }
        let below = sp.grid.pairs.get(&(g - 1)).cloned().unwrap_or_default();
        for (k, &pair) in below.iter().enumerate() {
            if n < 2 {
                break;
            }
            // F(dV X_0) = d X_0
            let mut col = vec![Gr::ZERO; dim];
            add_d_x0(sp, ring, &mut col, pair, one);
            for (i, x) in col.into_iter().enumerate() {
                f.set(i, sp.y_index(g, 1, k), x);
            }
            for s in 2..n {
                f.set(sp.y_index(g, s - 1, k), sp.y_index(g, s, k), one);
            }
            for s in 1..n - 1 {
                v.set(sp.y_index(g, s + 1, k), sp.y_index(g, s, k), p);
            }
        }
        fs.insert(g, f);
        vs.insert(g, v);
        ds.insert(g, d);
    }
    for (g, f) in fs {
        sp.module.set_f_map(g, SemiMap::new(f, 1));
    }
    for (g, v) in vs {
        sp.module.set_v_map(g, SemiMap::new(v, -1));
    }
    for (g, d) in ds {
        if dims.get(&(g + 1)).copied().unwrap_or(0) > 0 {
            sp.module.set_d(g, d);
        }
    }
    Ok(())
}

fn base_relations(sp: &StarPresentation, ring: &GaloisRing, dims: &BTreeMap<i64, usize>) -> BTreeMap<i64, Vec<Vec<Gr>>> {
    let (m, n) = (&sp.left, &sp.right);
    let t = &sp.module;
    let p = ring.p_pow(1);
    let one = ring.one();
    let mut rels: BTreeMap<i64, Vec<Vec<Gr>>> = dims.keys().map(|&g| (g, Vec::new())).collect();
    for ga in m.gradings() {
        for gb in n.gradings() {
            let g = ga + gb;
            let dim = dims[&g];
            let slot = rels.get_mut(&g).expect("grading");
            for rho in m.rel(ga).cols_iter() {
                for b in 0..n.dim(gb) {
                    let mut col = vec![Gr::ZERO; dim];
                    sp.grid.add_tensor(ring, &mut col, 0, ga, &rho, gb, &unit(ring, n.dim(gb), b), one);
                    slot.push(col);
                }
            }
            for rho in n.rel(gb).cols_iter() {
                for a in 0..m.dim(ga) {
                    let mut col = vec![Gr::ZERO; dim];
                    sp.grid.add_tensor(ring, &mut col, 0, ga, &unit(ring, m.dim(ga), a), gb, &rho, one);
                    slot.push(col);
                }
            }
            for a in 0..m.dim(ga) {
                let ea = unit(ring, m.dim(ga), a);
                for b in 0..n.dim(gb) {
                    let eb = unit(ring, n.dim(gb), b);
                    // (V m) ⋆ n - V(m ⋆ F n)
                    let mut lhs = vec![Gr::ZERO; dim];
                    sp.grid.add_tensor(ring, &mut lhs, 0, ga, &m.apply_v(ga, &ea), gb, &eb, one);
                    let mut inner = vec![Gr::ZERO; dim];
                    sp.grid.add_tensor(ring, &mut inner, 0, ga, &ea, gb, &n.apply_f(gb, &eb), one);
                    let rhs = t.apply_v(g, &inner);
                    slot.push(lhs.iter().zip(&rhs).map(|(&x, &y)| ring.sub(x, y)).collect());
                    // m ⋆ (V n) - V(F m ⋆ n)
                    let mut lhs = vec![Gr::ZERO; dim];
                    sp.grid.add_tensor(ring, &mut lhs, 0, ga, &ea, gb, &n.apply_v(gb, &eb), one);
                    let mut inner = vec![Gr::ZERO; dim];
                    sp.grid.add_tensor(ring, &mut inner, 0, ga, &m.apply_f(ga, &ea), gb, &eb, one);
                    let rhs = t.apply_v(g, &inner);
                    slot.push(lhs.iter().zip(&rhs).map(|(&x, &y)| ring.sub(x, y)).collect());
                }
            }
        }
    }
    // V d X_0 = p dV X_0
    if sp.depth >= 2 {
        for (&g, pairs) in &sp.grid.pairs {
            let up = dims.get(&(g + 1)).copied().unwrap_or(0);
            if up == 0 {
                continue;
            }
            for (k, &pair) in pairs.iter().enumerate() {
                let mut dx = vec![Gr::ZERO; up];
                add_d_x0(sp, ring, &mut dx, pair, one);
                let mut col = t.apply_v(g + 1, &dx);
                let y = sp.y_index(g + 1, 1, k);
                col[y] = ring.sub(col[y], p);
                rels.get_mut(&(g + 1)).expect("grading").push(col);
            }
        }
    }
    rels
}

/// Closes the relations under `V` and `d` and Smith-reduces them.
fn saturate(
    t: &Tgm,
    ring: &GaloisRing,
    dims: &BTreeMap<i64, usize>,
    base: BTreeMap<i64, Vec<Vec<Gr>>>,
    n: u32,
) -> Result<BTreeMap<i64, Mat>> {
    let mut rel: BTreeMap<i64, Mat> =
        base.into_iter().map(|(g, cols)| (g, reduce_span(ring, dims[&g], &Mat::from_cols(dims[&g], &cols)))).collect();
    let lengths = |rel: &BTreeMap<i64, Mat>| -> Vec<u64> {
        rel.iter().map(|(g, r)| quotient_length(ring, dims[g], r)).collect()
    };
    let mut last = lengths(&rel);
    let limit = ROUNDS_PER_DEPTH * (n as usize + 2);
    for _ in 0..limit {
        let mut next = BTreeMap::new();
        for (&g, r) in &rel {
            let dim = dims[&g];
            let mut parts = vec![r.clone(), t.v_map(g).after(ring, &SemiMap::new(r.clone(), 0)).mat];
            if let Some(below) = rel.get(&(g - 1)) {
                if below.cols() > 0 && dims[&(g - 1)] > 0 {
                    parts.push(t.d_mat(g - 1).mul(ring, below));
                }
            }
            let all = Mat::hcat_all(dim, &parts.iter().collect::<Vec<_>>());
            next.insert(g, reduce_span(ring, dim, &all));
        }
        rel = next;
        let now = lengths(&rel);
        if now == last {
            return Ok(rel);
        }
        last = now;
    }
    Err(StarError::Overflow(limit))
}

/// `M ⋆ N` for two blocks at precision `m` and V-depth `n`.
pub fn star_blocks(a: &BlockModule, b: &BlockModule, m: u32, n: u32) -> Result<StarPresentation> {
    star_presentation(&a.truncate(m, n)?, &b.truncate(m, n)?, n)
}

/// The natural map `m ↦ m ⋆ 1` from `M` into `M ⋆ W`, where the second factor
/// is the unit block.
pub fn unit_map(sp: &StarPresentation) -> GradedMap {
    let ring = sp.module.ring();
    let mut map = GradedMap::default();
    for g in sp.left.gradings() {
        let cols: Vec<Vec<Gr>> = (0..sp.left.dim(g))
            .map(|a| unit(ring, sp.module.dim(g), sp.x_index(g, 0, sp.grid.pos((g, a, 0, 0)))))
            .collect();
        map.mats.insert(g, Mat::from_cols(sp.module.dim(g), &cols));
    }
    map
}

/// The signed swap `V^s(m ⋆ n) ↦ (-1)^{|m||n|} V^s(n ⋆ m)` from `M ⋆ N` to `N ⋆ M`.
pub fn swap_map(sp: &StarPresentation, other: &StarPresentation) -> GradedMap {
    let ring = sp.module.ring();
    let n = sp.depth;
    let mut map = GradedMap::default();
    for g in sp.module.gradings() {
        let dim = other.module.dim(g);
        let mut cols = vec![vec![Gr::ZERO; dim]; sp.module.dim(g)];
        for (k, &(ga, a, gb, b)) in sp.grid.pairs.get(&g).cloned().unwrap_or_default().iter().enumerate() {
            let k2 = other.grid.pos((gb, b, ga, a));
            for s in 0..n {
                cols[sp.x_index(g, s, k)][other.x_index(g, s, k2)] = sign(ring, ga * gb);
            }
        }
        for (k, &(ga, a, gb, b)) in sp.grid.pairs.get(&(g - 1)).cloned().unwrap_or_default().iter().enumerate() {
            let k2 = other.grid.pos((gb, b, ga, a));
            for s in 1..n {
                cols[sp.y_index(g, s, k)][other.y_index(g, s, k2)] = sign(ring, ga * gb);
            }
        }
        map.mats.insert(g, Mat::from_cols(dim, &cols));
    }
    map
}
