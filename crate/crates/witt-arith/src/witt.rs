//! Truncated Witt vectors `W_m(F_{p^r})` in Witt coordinates.
//!
//! Sums and products are computed componentwise from ghost components: with
//! arbitrary lifts `â_i` of the coordinates to `GR(p^m, r)`, the quantity
//! `w_n(a) op w_n(b) - sum_{i<n} p^i ŝ_i^{p^{n-i}}` is `p^n s_n` modulo
//! `p^{n+1}`, independently of the lifts chosen.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::WittError;
use crate::galois::{GaloisRing, Gr};

/// An element of `F_{p^r}`, coordinates in the basis `1, x, ..., x^{r-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElt {
    p: u64,
    r: usize,
    value: Gr,
}

impl FieldElt {
    pub fn new(p: u64, r: usize, coords: &[u64]) -> Result<Self, WittError> {
        if coords.len() != r || coords.iter().any(|&c| c >= p) {
            return Err(WittError::BadCoordinate { p, r });
        }
        let f = field(p, r)?;
        Ok(FieldElt { p, r, value: f.from_coeffs(coords) })
    }

    pub fn zero(p: u64, r: usize) -> Self {
        FieldElt { p, r, value: Gr::ZERO }
    }

    pub fn from_int(p: u64, n: i64) -> Self {
        let mut value = Gr::ZERO;
        value.0[0] = n.rem_euclid(p as i64) as u64;
        FieldElt { p, r: 1, value }
    }

    pub(crate) fn from_gr(p: u64, r: usize, value: Gr) -> Self {
        FieldElt { p, r, value }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn coords(&self) -> Vec<u64> {
        self.value.0[..self.r].to_vec()
    }
    pub fn as_gr(&self) -> Gr {
        self.value
    }
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// An element of `W_m(F_{p^r})` given by its Witt coordinates `(a_0, ..., a_{m-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittScalar {
    p: u64,
    r: usize,
    comps: Vec<FieldElt>,
}

impl fmt::Display for WittScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|c| {
                if self.r == 1 {
                    c.value.0[0].to_string()
                } else {
                    format!("{:?}", c.coords())
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

type CtxKey = (u64, usize, u32);

fn ctx(p: u64, r: usize, m: u32) -> Result<Arc<GaloisRing>, WittError> {
    static CACHE: OnceLock<Mutex<HashMap<CtxKey, Arc<GaloisRing>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("context cache poisoned");
    if let Some(g) = guard.get(&(p, r, m)) {
        return Ok(g.clone());
    }
    let g = Arc::new(GaloisRing::new(p, r, m)?);
    guard.insert((p, r, m), g.clone());
    Ok(g)
}

fn field(p: u64, r: usize) -> Result<Arc<GaloisRing>, WittError> {
    ctx(p, r, 1)
}

impl WittScalar {
    pub fn new(comps: Vec<FieldElt>) -> Result<Self, WittError> {
        let first = comps.first().ok_or(WittError::Precision(0))?;
        let (p, r) = (first.p, first.r);
        if comps.iter().any(|c| c.p != p || c.r != r) {
            return Err(WittError::Incompatible);
        }
        Ok(WittScalar { p, r, comps })
    }

    /// Witt vector over the prime field from integer coordinates.
    pub fn from_coords(p: u64, coords: &[u64]) -> Result<Self, WittError> {
        let comps = coords
            .iter()
            .map(|&c| FieldElt::new(p, 1, &[c]))
            .collect::<Result<Vec<_>, _>>()?;
        WittScalar::new(comps)
    }

    pub fn zero(p: u64, r: usize, m: usize) -> Self {
        WittScalar { p, r, comps: vec![FieldElt::zero(p, r); m] }
    }

    pub fn one(p: u64, r: usize, m: usize) -> Self {
        let mut z = Self::zero(p, r, m);
        z.comps[0].value.0[0] = 1;
        z
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn len(&self) -> usize {
        self.comps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
    pub fn components(&self) -> &[FieldElt] {
        &self.comps
    }
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &WittScalar) -> Result<(), WittError> {
        if self.p != other.p || self.r != other.r || self.len() != other.len() {
            return Err(WittError::Incompatible);
        }
        Ok(())
    }

    fn ring(&self) -> Arc<GaloisRing> {
        ctx(self.p, self.r, self.len() as u32).expect("parameters validated at construction")
    }

    /// Ghost components `w_0, ..., w_{m-1}` of the coordinate lifts.
    fn ghosts(&self, g: &GaloisRing) -> Vec<Gr> {
        let p = self.p as u128;
        let lifts: Vec<Gr> = self.comps.iter().map(|c| g.lift_from(c.value)).collect();
        (0..self.len())
            .map(|n| {
                let mut acc = Gr::ZERO;
                for (i, &a) in lifts.iter().enumerate().take(n + 1) {
                    let t = g.pow(a, p.pow((n - i) as u32));
                    acc = g.add(acc, g.mul(g.p_pow(i as u32), t));
                }
                acc
            })
            .collect()
    }

    /// Recovers Witt coordinates from target ghost components.
    fn from_ghosts(p: u64, r: usize, g: &GaloisRing, ghosts: &[Gr]) -> WittScalar {
        let pp = p as u128;
        let f = field(p, r).expect("validated");
        let mut lifts: Vec<Gr> = Vec::with_capacity(ghosts.len());
        for (n, &w) in ghosts.iter().enumerate() {
            let mut rest = w;
            for (i, &s) in lifts.iter().enumerate() {
                let t = g.pow(s, pp.pow((n - i) as u32));
                rest = g.sub(rest, g.mul(g.p_pow(i as u32), t));
            }
            let top = g.reduce(rest, n as u32 + 1);
            let s = g.reduce(g.div_p_pow(top, n as u32), 1);
            lifts.push(s);
        }
        let comps = lifts.into_iter().map(|s| FieldElt::from_gr(p, r, f.lift_from(s))).collect();
        WittScalar { p, r, comps }
    }

    fn ghost_op(&self, other: &WittScalar, op: impl Fn(&GaloisRing, Gr, Gr) -> Gr) -> Result<Self, WittError> {
        self.check(other)?;
        let g = self.ring();
        let a = self.ghosts(&g);
        let b = other.ghosts(&g);
        let w: Vec<Gr> = a.iter().zip(&b).map(|(&x, &y)| op(&g, x, y)).collect();
        Ok(Self::from_ghosts(self.p, self.r, &g, &w))
    }

    pub fn add(&self, other: &WittScalar) -> Result<Self, WittError> {
        self.ghost_op(other, |g, x, y| g.add(x, y))
    }

    pub fn sub(&self, other: &WittScalar) -> Result<Self, WittError> {
        self.ghost_op(other, |g, x, y| g.sub(x, y))
    }

    pub fn mul(&self, other: &WittScalar) -> Result<Self, WittError> {
        self.ghost_op(other, |g, x, y| g.mul(x, y))
    }

    pub fn neg(&self) -> Self {
        let z = WittScalar::zero(self.p, self.r, self.len());
        z.sub(self).expect("same parameters")
    }

    /// The Witt vector Frobenius, which is `sigma` over a perfect field.
    pub fn frobenius(&self) -> Self {
        let f = field(self.p, self.r).expect("validated");
        let comps = self
            .comps
            .iter()
            .map(|c| FieldElt::from_gr(self.p, self.r, f.pow(c.value, self.p as u128)))
            .collect();
        WittScalar { p: self.p, r: self.r, comps }
    }

    /// Inverse of the Frobenius.
    pub fn frobenius_inv(&self) -> Self {
        let mut x = self.clone();
        for _ in 1..self.r {
            x = x.frobenius();
        }
        x
    }

    /// Shift `(a_0, a_1, ...) -> (0, a_0, a_1, ...)`, dropping the last coordinate.
    pub fn verschiebung(&self) -> Self {
        let mut comps = Vec::with_capacity(self.len());
        comps.push(FieldElt::zero(self.p, self.r));
        comps.extend_from_slice(&self.comps[..self.len() - 1]);
        WittScalar { p: self.p, r: self.r, comps }
    }

    /// `(x, 0, ..., 0)`.
    pub fn teichmuller(x: FieldElt, m: usize) -> Self {
        let mut comps = vec![FieldElt::zero(x.p, x.r); m];
        comps[0] = x;
        WittScalar { p: x.p, r: x.r, comps }
    }

    /// Index of the first nonzero coordinate, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.comps.iter().position(|c| !c.is_zero())
    }

    /// `p` times `self`, computed as `V(F(self))`.
    pub fn times_p(&self) -> Self {
        self.frobenius().verschiebung()
    }

    /// The isomorphic image `sum_i p^i [a_i^{p^{-i}}]` in `GR(p^m, r)`.
    pub fn to_galois(&self) -> Gr {
        let g = self.ring();
        let f = field(self.p, self.r).expect("validated");
        let mut acc = Gr::ZERO;
        for (i, c) in self.comps.iter().enumerate() {
            // a^{p^{-i}} = a^{p^{r k - i}} for r k >= i
            let k = i.div_ceil(self.r);
            let e = (self.p as u128).pow((self.r * k - i) as u32);
            let root = f.pow(c.value, e);
            let t = g.teichmuller(g.lift_from(root));
            acc = g.add(acc, g.mul(g.p_pow(i as u32), t));
        }
        acc
    }

    /// Inverse of [`WittScalar::to_galois`].
    pub fn from_galois(p: u64, r: usize, m: usize, x: Gr) -> Result<Self, WittError> {
        let g = ctx(p, r, m as u32)?;
        let f = field(p, r)?;
        let mut rest = g.lift_from(x);
        let mut comps = Vec::with_capacity(m);
        for i in 0..m {
            let c = f.lift_from(g.reduce(rest, 1));
            let t = g.teichmuller(g.lift_from(c));
            rest = g.sub(rest, t);
            rest = g.div_p_pow(rest, 1);
            comps.push(FieldElt::from_gr(p, r, f.pow(c, (p as u128).pow(i as u32))));
        }
        Ok(WittScalar { p, r, comps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sums() {
        let one = WittScalar::from_coords(2, &[1, 0, 0]).unwrap();
        assert_eq!(one.add(&one).unwrap(), WittScalar::from_coords(2, &[0, 1, 0]).unwrap());
        let a = WittScalar::from_coords(3, &[1, 0]).unwrap();
        let b = WittScalar::from_coords(3, &[2, 0]).unwrap();
        // [2] is the Teichmüller lift -1, so [1] + [2] = 0 in W_2(F_3).
        assert_eq!(a.add(&b).unwrap(), WittScalar::zero(3, 1, 2));
        let two = WittScalar::from_coords(3, &[2, 1]).unwrap();
        assert_eq!(a.add(&two).unwrap(), WittScalar::from_coords(3, &[0, 1]).unwrap());
    }

    #[test]
    fn products_and_valuation() {
        let v1 = WittScalar::from_coords(2, &[0, 1, 0]).unwrap();
        let sq = v1.mul(&v1).unwrap();
        assert_eq!(sq, WittScalar::from_coords(2, &[0, 0, 1]).unwrap());
        assert_eq!(sq.valuation(), Some(2));
        assert_eq!(WittScalar::zero(2, 1, 3).valuation(), None);
        assert_eq!(WittScalar::one(2, 1, 3).verschiebung().valuation(), Some(1));
    }

    #[test]
    fn mismatched_parameters() {
        let a = WittScalar::from_coords(2, &[1, 0]).unwrap();
        let b = WittScalar::from_coords(2, &[1, 0, 0]).unwrap();
        assert_eq!(a.add(&b), Err(WittError::Incompatible));
    }
}
