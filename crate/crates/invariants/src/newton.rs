//! Newton slopes of Frobenius and convex polygons.

use num_rational::Ratio;
use num_traits::{One, Zero};
use rmod_core::{GaloisRing, Gr, Mat, Tgm};

use crate::error::{InvError, Result};

pub type Q = Ratio<i64>;

/// Coefficients `c_0, ..., c_n` of `det(x I - A)` (Berkowitz, division free).
pub fn charpoly(ring: &GaloisRing, a: &Mat) -> Vec<Gr> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "charpoly needs a square matrix");
    if n == 0 {
        return vec![ring.one()];
    }
    // descending coefficients of the leading r x r minor
    let mut c = vec![ring.one(), ring.neg(a.get(0, 0))];
    for r in 1..n {
        let row: Vec<Gr> = (0..r).map(|j| a.get(r, j)).collect();
        let mut col: Vec<Gr> = (0..r).map(|i| a.get(i, r)).collect();
        let s = a.sub_block(0, r, 0, r);
        let mut t = vec![ring.one(), ring.neg(a.get(r, r))];
        for _ in 0..r {
            let rc = row.iter().zip(&col).fold(ring.zero(), |acc, (&x, &y)| ring.add(acc, ring.mul(x, y)));
            t.push(ring.neg(rc));
            col = s.apply(ring, &col);
        }
        let mut next = vec![ring.zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, &cj) in c.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot = ring.add(*slot, ring.mul(t[i - j], cj));
                }
            }
        }
        c = next;
    }
    c.reverse();
    c
}

/// Root valuations of a polynomial from its coefficient valuations
/// (`None` = at least the working precision), ascending, with multiplicities.
pub fn polygon_slopes(vals: &[Option<u32>]) -> Vec<(Q, u32)> {
    let pts: Vec<(i64, i64)> =
        vals.iter().enumerate().filter_map(|(k, v)| v.map(|v| (k as i64, v as i64))).collect();
    // lower convex hull, left to right
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out: Vec<(Q, u32)> = hull
        .windows(2)
        .map(|w| (Q::new(w[0].1 - w[1].1, w[1].0 - w[0].0), (w[1].0 - w[0].0) as u32))
        .collect();
    out.sort();
    out
}

/// Slopes of `F` on grading `g` of a free module over `W_m` (`r = 1`).
pub fn newton_slopes(t: &Tgm, g: i64) -> Result<Vec<(Q, u32)>> {
    if t.r() != 1 {
        return Err(InvError::Unsupported("semilinear slopes for r > 1: supply slope metadata".into()));
    }
    let m = t.precision();
    let (nf, _) = t.normal_form();
    let ring = nf.ring().clone();
    let diag = nf.rel(g);
    for k in 0..nf.dim(g) {
        let e = ring.valuation(diag.get(k, k)).min(ring.precision());
        if e < m {
            return Err(InvError::Unsupported("Newton slopes need a torsion-free module".into()));
        }
    }
    let poly = charpoly(&ring, &nf.f_map(g).mat);
    let vals: Vec<Option<u32>> = poly
        .iter()
        .map(|&c| {
            let v = ring.valuation(c);
            (v < m).then_some(v)
        })
        .collect();
    if vals[0].is_none() {
        return Err(InvError::Precision(format!("det F vanishes modulo p^{m}; slopes are not certified")));
    }
    Ok(merge(polygon_slopes(&vals)))
}

fn merge(mut v: Vec<(Q, u32)>) -> Vec<(Q, u32)> {
    v.sort();
    let mut out: Vec<(Q, u32)> = Vec::new();
    for (s, k) in v {
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 += k,
            _ => out.push((s, k)),
        }
    }
    out
}

/// A convex polygon from the origin: segments of increasing slope.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polygon {
    /// `(slope, horizontal length)`, sorted by slope, lengths positive.
    pub segments: Vec<(Q, Q)>,
}

impl Polygon {
    pub fn new(segs: impl IntoIterator<Item = (Q, Q)>) -> Self {
        let mut v: Vec<(Q, Q)> = segs.into_iter().filter(|s| s.1 != Q::zero()).collect();
        v.sort();
        let mut segments: Vec<(Q, Q)> = Vec::new();
        for (s, l) in v {
            match segments.last_mut() {
                Some(last) if last.0 == s => last.1 += l,
                _ => segments.push((s, l)),
            }
        }
        Polygon { segments }
    }

    pub fn vertices(&self) -> Vec<(Q, Q)> {
        let mut pts = vec![(Q::zero(), Q::zero())];
        let (mut x, mut y) = (Q::zero(), Q::zero());
        for &(s, l) in &self.segments {
            x += l;
            y += s * l;
            pts.push((x, y));
        }
        pts
    }

    pub fn end(&self) -> (Q, Q) {
        *self.vertices().last().expect("origin")
    }

    /// Height at `x` in `[0, width]`.
    pub fn eval(&self, x: Q) -> Q {
        let (mut x0, mut y) = (Q::zero(), Q::zero());
        for &(s, l) in &self.segments {
            if x <= x0 + l {
                return y + s * (x - x0);
            }
            x0 += l;
            y += s * l;
        }
        y
    }

    pub fn has_integral_slopes(&self) -> bool {
        self.segments.iter().all(|(s, _)| s.denom().is_one())
    }

    /// Whether `self` lies on or below `other` with the same endpoints.
    pub fn lies_below(&self, other: &Polygon) -> bool {
        if self.end() != other.end() {
            return false;
        }
        let mut xs: Vec<Q> = self.vertices().into_iter().map(|v| v.0).collect();
        xs.extend(other.vertices().into_iter().map(|v| v.0));
        xs.iter().all(|&x| self.eval(x) <= other.eval(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn berkowitz_small() {
        let ring = GaloisRing::new(5, 1, 4).unwrap();
        let a = Mat::from_int_rows(&ring, &[vec![1, 2, 0], vec![3, 4, 1], vec![0, 5, 2]]);
        let c = charpoly(&ring, &a);
        // x^3 - 7x^2 + 3x + 9
        let expect = [9, 3, -7, 1].map(|v| ring.from_int(v));
        assert_eq!(c, expect.to_vec());
    }

    #[test]
    fn hull_of_eisenstein() {
        let s = polygon_slopes(&[Some(1), None, None, Some(0)]);
        assert_eq!(s, vec![(Q::new(1, 3), 3)]);
        let s = polygon_slopes(&[Some(2), Some(0), Some(0)]);
        assert_eq!(s, vec![(Q::from_integer(0), 1), (Q::from_integer(2), 1)]);
    }

    #[test]
    fn polygon_eval() {
        let p = Polygon::new([(Q::from_integer(1), Q::from_integer(1)), (Q::from_integer(0), Q::from_integer(2))]);
        assert_eq!(p.end(), (Q::from_integer(3), Q::from_integer(1)));
        assert_eq!(p.eval(Q::new(5, 2)), Q::new(1, 2));
        let n = Polygon::new([(Q::new(1, 3), Q::from_integer(3))]);
        assert!(p.lies_below(&n));
        assert!(!n.lies_below(&p));
    }
}
