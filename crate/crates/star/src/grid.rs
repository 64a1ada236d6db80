//! Index bookkeeping for products of two graded presentations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rmod_core::linalg::{snf, Want};
use rmod_core::{GaloisRing, Gr, Mat, Tgm};

/// A generator pair `(grading of a, a, grading of b, b)`.
pub type Pair = (i64, usize, i64, usize);

/// All generator pairs of `M` and `N`, grouped by total grading.
#[derive(Clone, Debug, Default)]
pub struct Grid {
    pub pairs: BTreeMap<i64, Vec<Pair>>,
    pos: HashMap<Pair, usize>,
}

impl Grid {
    pub fn new(m: &Tgm, n: &Tgm) -> Self {
        let mut pairs: BTreeMap<i64, Vec<Pair>> = BTreeMap::new();
        let mut pos = HashMap::new();
        for ga in m.gradings() {
            for gb in n.gradings() {
                let slot = pairs.entry(ga + gb).or_default();
                for a in 0..m.dim(ga) {
                    for b in 0..n.dim(gb) {
                        pos.insert((ga, a, gb, b), slot.len());
                        slot.push((ga, a, gb, b));
                    }
                }
            }
        }
        Grid { pairs, pos }
    }

    pub fn count(&self, g: i64) -> usize {
        self.pairs.get(&g).map_or(0, Vec::len)
    }

    pub fn pos(&self, pair: Pair) -> usize {
        self.pos[&pair]
    }

    pub fn gradings(&self) -> BTreeSet<i64> {
        self.pairs.iter().filter(|(_, v)| !v.is_empty()).map(|(&g, _)| g).collect()
    }

    /// Adds `c · (u ⊗ w)` for `u` in grading `ga` of `M`, `w` in grading `gb`
    /// of `N`, writing pair `k` at `col[offset + k]`.
    #[allow(clippy::too_many_arguments)]
    pub fn add_tensor(
        &self,
        ring: &GaloisRing,
        col: &mut [Gr],
        offset: usize,
        ga: i64,
        u: &[Gr],
        gb: i64,
        w: &[Gr],
        c: Gr,
    ) {
        for (a, &x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let cx = ring.mul(c, x);
            for (b, &y) in w.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = offset + self.pos((ga, a, gb, b));
                col[k] = ring.add(col[k], ring.mul(cx, y));
            }
        }
    }
}

pub fn unit(ring: &GaloisRing, n: usize, k: usize) -> Vec<Gr> {
    let mut e = vec![Gr::ZERO; n];
    e[k] = ring.one();
    e
}

/// `(-1)^k` in the ring.
pub fn sign(ring: &GaloisRing, k: i64) -> Gr {
    if k.rem_euclid(2) == 0 {
        ring.one()
    } else {
        ring.neg(ring.one())
    }
}

/// A minimal generating set of the span of `gens`.
pub fn reduce_span(ring: &GaloisRing, dim: usize, gens: &Mat) -> Mat {
    if gens.cols() == 0 || dim == 0 {
        return Mat::zeros(dim, 0);
    }
    let s = snf(ring, gens, Want { p_inv: true, ..Want::NONE });
    let pi = s.p_inv.expect("requested");
    let cols: Vec<Vec<Gr>> = s
        .vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < ring.precision())
        .map(|(k, &v)| {
            let c = ring.p_pow(v);
            pi.col(k).into_iter().map(|x| ring.mul(x, c)).collect()
        })
        .collect();
    Mat::from_cols(dim, &cols)
}
