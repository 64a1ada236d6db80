//! Closed form of `M ⋆ N` when `F` is bijective on `N`: the tensor product
//! `M ⊗_W N` with `F = F ⊗ F`, `V = V ⊗ F^{-1}` and the graded Leibniz rule
//! for `d`.

use std::collections::BTreeMap;

use rmod_core::linalg::solve;
use rmod_core::{GaloisRing, GradedMap, Gr, Mat, SemiMap, Tgm};

use crate::error::{Result, StarError};
use crate::grid::{sign, unit, Grid};
use crate::presentation::StarPresentation;

/// `M ⊗_W N` together with its pair grid.
#[derive(Clone, Debug)]
pub struct TensorForm {
    pub module: Tgm,
    pub grid: Grid,
}

/// `F^{-1}` on grading `g` of `n`, as a sigma-inverse-semilinear matrix.
fn f_inverse(n: &Tgm, g: i64) -> Result<Mat> {
    let ring = n.ring();
    let dim = n.dim(g);
    let a = n.f_map(g).mat.hcat(&n.rel(g));
    let mut cols = Vec::with_capacity(dim);
    for b in 0..dim {
        let z = solve(ring, &a, &unit(ring, dim, b))
            .ok_or_else(|| StarError::Inapplicable(format!("F is not surjective on grading {g}")))?;
        cols.push(z[..dim].iter().map(|&x| ring.sigma_inv(x)).collect::<Vec<Gr>>());
    }
    Ok(Mat::from_cols(dim, &cols))
}

/// `M ⋆ N` as `M ⊗_W N`, requiring `F` to be bijective on `N`. Both inputs
/// are truncations at the same precision; the result is cut at V-depth `n`.
pub fn star_frobenius_bijective(m: &Tgm, n_mod: &Tgm, n: u32) -> Result<TensorForm> {
    let ring: GaloisRing = m.ring().clone();
    if n_mod.ring().precision() != ring.precision() || n_mod.p() != m.p() || n_mod.r() != m.r() {
        return Err(StarError::Unsupported("factors live over different coefficient rings".into()));
    }
    let mut finv = BTreeMap::new();
    for gb in n_mod.gradings() {
        finv.insert(gb, f_inverse(n_mod, gb)?);
    }
    let grid = Grid::new(m, n_mod);
    let one = ring.one();
    let mut t = Tgm::new(ring.clone(), n);
    let gs: Vec<i64> = grid.gradings().into_iter().collect();
    for &g in &gs {
        let dim = grid.count(g);
        let mut labels = Vec::with_capacity(dim);
        let mut rel = Vec::new();
        for &(ga, a, gb, b) in &grid.pairs[&g] {
            labels.push(format!("{}*{}", m.labels(ga)[a], n_mod.labels(gb)[b]));
        }
        for ga in m.gradings() {
            let gb = g - ga;
            if n_mod.dim(gb) == 0 || m.dim(ga) == 0 {
                continue;
            }
            for rho in m.rel(ga).cols_iter() {
                for b in 0..n_mod.dim(gb) {
                    let mut col = vec![Gr::ZERO; dim];
                    grid.add_tensor(&ring, &mut col, 0, ga, &rho, gb, &unit(&ring, n_mod.dim(gb), b), one);
                    rel.push(col);
                }
            }
            for rho in n_mod.rel(gb).cols_iter() {
                for a in 0..m.dim(ga) {
                    let mut col = vec![Gr::ZERO; dim];
                    grid.add_tensor(&ring, &mut col, 0, ga, &unit(&ring, m.dim(ga), a), gb, &rho, one);
                    rel.push(col);
                }
            }
        }
        t.add_grading(g, labels, Mat::from_cols(dim, &rel));
    }
    for &g in &gs {
        let dim = grid.count(g);
        let up = grid.count(g + 1);
        let mut f = Mat::zeros(dim, dim);
        let mut v = Mat::zeros(dim, dim);
        let mut d = Mat::zeros(up, dim);
        for (k, &(ga, a, gb, b)) in grid.pairs[&g].iter().enumerate() {
            let ea = unit(&ring, m.dim(ga), a);
            let eb = unit(&ring, n_mod.dim(gb), b);
            let mut col = vec![Gr::ZERO; dim];
            grid.add_tensor(&ring, &mut col, 0, ga, &m.f_map(ga).mat.col(a), gb, &n_mod.f_map(gb).mat.col(b), one);
            put_col(&mut f, k, &col);
            let mut col = vec![Gr::ZERO; dim];
            grid.add_tensor(&ring, &mut col, 0, ga, &m.v_map(ga).mat.col(a), gb, &finv[&gb].col(b), one);
            put_col(&mut v, k, &col);
            if up > 0 {
                let mut col = vec![Gr::ZERO; up];
                if m.dim(ga + 1) > 0 {
                    grid.add_tensor(&ring, &mut col, 0, ga + 1, &m.apply_d(ga, &ea), gb, &eb, one);
                }
                if n_mod.dim(gb + 1) > 0 {
                    grid.add_tensor(&ring, &mut col, 0, ga, &ea, gb + 1, &n_mod.apply_d(gb, &eb), sign(&ring, ga));
                }
                put_col(&mut d, k, &col);
            }
        }
        t.set_f_map(g, SemiMap::new(f, 1));
        t.set_v_map(g, SemiMap::new(v, -1));
        if up > 0 {
            t.set_d(g, d);
        }
    }
    t.close_truncation();
    Ok(TensorForm { module: t, grid })
}

fn put_col(m: &mut Mat, k: usize, col: &[Gr]) {
    for (i, &x) in col.iter().enumerate() {
        m.set(i, k, x);
    }
}

/// The comparison map `V^s(m ⋆ n) ↦ V^s(m ⊗ n)`, `dV^s(m ⋆ n) ↦ dV^s(m ⊗ n)`.
/// With `swapped`, the tensor form is `N ⊗ M` and pairs are exchanged with
/// the Koszul sign.
pub fn comparison_map(sp: &StarPresentation, tf: &TensorForm, swapped: bool) -> GradedMap {
    let ring = sp.module.ring();
    let t = &tf.module;
    let mut map = GradedMap::default();
    let image = |g: i64, pair: (i64, usize, i64, usize)| -> Vec<Gr> {
        let (ga, a, gb, b) = pair;
        let (pos, c) = if swapped {
            (tf.grid.pos((gb, b, ga, a)), sign(ring, ga * gb))
        } else {
            (tf.grid.pos(pair), ring.one())
        };
        let mut e = unit(ring, t.dim(g), pos);
        e[pos] = c;
        e
    };
    for g in sp.module.gradings() {
        let dim = t.dim(g);
        let mut cols = vec![vec![Gr::ZERO; dim]; sp.module.dim(g)];
        if dim > 0 {
            for (k, &pair) in sp.grid.pairs.get(&g).cloned().unwrap_or_default().iter().enumerate() {
                let mut x = image(g, pair);
                for s in 0..sp.depth {
                    cols[sp.x_index(g, s, k)] = x.clone();
                    x = t.apply_v(g, &x);
                }
            }
        }
        if t.dim(g - 1) > 0 && dim > 0 {
            for (k, &pair) in sp.grid.pairs.get(&(g - 1)).cloned().unwrap_or_default().iter().enumerate() {
                let mut x = image(g - 1, pair);
                for s in 0..sp.depth {
                    if s >= 1 {
                        cols[sp.y_index(g, s, k)] = t.apply_d(g - 1, &x);
                    }
                    x = t.apply_v(g - 1, &x);
                }
            }
        }
        map.mats.insert(g, Mat::from_cols(dim, &cols));
    }
    map
}
