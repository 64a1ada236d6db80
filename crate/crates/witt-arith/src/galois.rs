//! Galois rings `GR(p^m, r) = (Z/p^m)[x]/(f)`, the ring `W_m(F_{p^r})` in
//! polynomial coordinates.
//!
//! Elements are fixed-size coefficient arrays so they are `Copy`; all
//! arithmetic goes through a [`GaloisRing`] context holding the modulus, the
//! defining polynomial and the precomputed Frobenius images.

use crate::error::WittError;
use crate::table::irreducible;

/// Largest supported residue degree.
pub const MAX_R: usize = 4;

/// An element of a Galois ring, coefficients of `1, x, ..., x^{r-1}` in `[0, p^m)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gr(pub [u64; MAX_R]);

impl Gr {
    pub const ZERO: Gr = Gr([0; MAX_R]);

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Arithmetic context for `GR(p^m, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRing {
    p: u64,
    r: usize,
    m: u32,
    modulus: u64,
    poly: [u64; MAX_R + 1],
    /// `sigma_pow[k][i]` is `sigma^k(x^i)`.
    sigma_pow: Vec<[Gr; MAX_R]>,
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn vp(mut c: u64, p: u64) -> u32 {
    let mut v = 0;
    while c.is_multiple_of(p) {
        c /= p;
        v += 1;
    }
    v
}

impl GaloisRing {
    /// Builds `GR(p^m, r)` using the built-in irreducible polynomial table.
    pub fn new(p: u64, r: usize, m: u32) -> Result<Self, WittError> {
        if !matches!(p, 2 | 3 | 5 | 7) {
            return Err(WittError::UnsupportedPrime(p));
        }
        if r == 0 || r > MAX_R {
            return Err(WittError::UnsupportedDegree(r));
        }
        if m == 0 {
            return Err(WittError::Precision(m));
        }
        let modulus = p
            .checked_pow(m)
            .filter(|&q| q < (1u64 << 62))
            .ok_or(WittError::Precision(m))?;
        let mut poly = [0u64; MAX_R + 1];
        poly[..=r].copy_from_slice(irreducible(p, r));
        let mut ring = GaloisRing { p, r, m, modulus, poly, sigma_pow: Vec::new() };
        ring.init_sigma();
        Ok(ring)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn precision(&self) -> u32 {
        self.m
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    /// Coefficients of the defining polynomial, lowest degree first.
    pub fn defining_poly(&self) -> &[u64] {
        &self.poly[..=self.r]
    }

    /// Same residue field, different precision.
    pub fn with_precision(&self, m: u32) -> Result<Self, WittError> {
        GaloisRing::new(self.p, self.r, m)
    }

    pub fn zero(&self) -> Gr {
        Gr::ZERO
    }
    pub fn one(&self) -> Gr {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Gr {
        let mut g = Gr::ZERO;
        g.0[0] = n.rem_euclid(self.modulus as i64) as u64;
        g
    }

    /// The class of the generator `x`.
    pub fn generator(&self) -> Gr {
        let mut g = Gr::ZERO;
        if self.r == 1 {
            // x is the root of a linear polynomial x + c.
            g.0[0] = (self.modulus - self.poly[0] % self.modulus) % self.modulus;
        } else {
            g.0[1] = 1;
        }
        g
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Gr {
        let mut g = Gr::ZERO;
        for (i, &c) in coeffs.iter().take(self.r).enumerate() {
            g.0[i] = c % self.modulus;
        }
        g
    }

    /// `p^k`, zero once `k >= m`.
    pub fn p_pow(&self, k: u32) -> Gr {
        if k >= self.m {
            Gr::ZERO
        } else {
            self.from_int(self.p.pow(k) as i64)
        }
    }

    pub fn add(&self, a: Gr, b: Gr) -> Gr {
        let mut c = Gr::ZERO;
        for i in 0..self.r {
            let s = a.0[i] + b.0[i];
            c.0[i] = if s >= self.modulus { s - self.modulus } else { s };
        }
        c
    }

    pub fn neg(&self, a: Gr) -> Gr {
        let mut c = Gr::ZERO;
        for i in 0..self.r {
            c.0[i] = if a.0[i] == 0 { 0 } else { self.modulus - a.0[i] };
        }
        c
    }

    pub fn sub(&self, a: Gr, b: Gr) -> Gr {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Gr, b: Gr) -> Gr {
        let n = self.modulus;
        if self.r == 1 {
            let mut c = Gr::ZERO;
            c.0[0] = mulmod(a.0[0], b.0[0], n);
            return c;
        }
        let r = self.r;
        let mut prod = [0u128; 2 * MAX_R];
        for i in 0..r {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] = (prod[i + j] + a.0[i] as u128 * b.0[j] as u128) % n as u128;
            }
        }
        for k in (r..2 * r - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..r {
                // x^r = -(f_0 + ... + f_{r-1} x^{r-1})
                let t = c * self.poly[i] as u128 % n as u128;
                prod[k - r + i] = (prod[k - r + i] + n as u128 - t) % n as u128;
            }
        }
        let mut c = Gr::ZERO;
        for (dst, &src) in c.0.iter_mut().zip(&prod[..r]) {
            *dst = src as u64;
        }
        c
    }

    pub fn scale(&self, a: Gr, s: i64) -> Gr {
        self.mul(a, self.from_int(s))
    }

    pub fn pow(&self, a: Gr, mut e: u128) -> Gr {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// p-adic valuation; `m` for zero.
    pub fn valuation(&self, a: Gr) -> u32 {
        (0..self.r)
            .filter(|&i| a.0[i] != 0)
            .map(|i| vp(a.0[i], self.p))
            .min()
            .unwrap_or(self.m)
    }

    pub fn is_unit(&self, a: Gr) -> bool {
        self.valuation(a) == 0
    }

    /// Exact division by `p^k`; the result is determined modulo `p^{m-k}`.
    pub fn div_p_pow(&self, a: Gr, k: u32) -> Gr {
        debug_assert!(self.valuation(a) >= k);
        let d = self.p.pow(k);
        let mut c = Gr::ZERO;
        for i in 0..self.r {
            c.0[i] = a.0[i] / d;
        }
        c
    }

    /// Reduction of coefficients modulo `p^k` (as a representative in this ring).
    pub fn reduce(&self, a: Gr, k: u32) -> Gr {
        if k >= self.m {
            return a;
        }
        let d = self.p.pow(k);
        let mut c = Gr::ZERO;
        for i in 0..self.r {
            c.0[i] = a.0[i] % d;
        }
        c
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self, a: Gr) -> Option<Gr> {
        if !self.is_unit(a) {
            return None;
        }
        let q = (self.p as u128).pow(self.r as u32);
        // Inverse modulo p via a^(q-2), then Newton lifting.
        let mut x = self.pow(a, q - 2);
        let two = self.from_int(2);
        for _ in 0..=(64 - self.m.leading_zeros()) {
            x = self.mul(x, self.sub(two, self.mul(a, x)));
        }
        debug_assert_eq!(self.mul(a, x), self.one());
        Some(x)
    }

    /// Splits `a = p^v u` with `u` a unit; `None` for zero.
    pub fn unit_part(&self, a: Gr) -> Option<(u32, Gr)> {
        let v = self.valuation(a);
        if v >= self.m {
            return None;
        }
        Some((v, self.div_p_pow(a, v)))
    }

    fn eval_poly(&self, y: Gr) -> Gr {
        let mut acc = self.one();
        for i in (0..self.r).rev() {
            acc = self.add(self.mul(acc, y), self.from_int(self.poly[i] as i64));
        }
        acc
    }

    fn eval_deriv(&self, y: Gr) -> Gr {
        let mut acc = self.from_int(self.r as i64);
        for i in (1..self.r).rev() {
            acc = self.add(self.mul(acc, y), self.from_int((i as u64 * self.poly[i]) as i64));
        }
        acc
    }

    fn init_sigma(&mut self) {
        let r = self.r;
        // Image of the generator: the root of f lifting x^p.
        let mut y = self.pow(self.generator(), self.p as u128);
        for _ in 0..=(64 - self.m.leading_zeros()) + 1 {
            let fy = self.eval_poly(y);
            let dy = self.inv(self.eval_deriv(y)).expect("f is separable mod p");
            y = self.sub(y, self.mul(fy, dy));
        }
        let mut basis = [Gr::ZERO; MAX_R];
        for (i, b) in basis.iter_mut().enumerate().take(r) {
            b.0[i] = 1;
        }
        if r == 1 {
            basis[0] = self.one();
        }
        // sigma(x^i) = y^i; higher powers of sigma by composition.
        let mut first = [Gr::ZERO; MAX_R];
        for (i, slot) in first.iter_mut().enumerate().take(r) {
            *slot = self.pow(y, i as u128);
        }
        self.sigma_pow = vec![basis, first];
        for k in 2..r {
            let prev = self.sigma_pow[k - 1];
            let mut next = [Gr::ZERO; MAX_R];
            for i in 0..r {
                next[i] = self.apply_linear(&first, prev[i]);
            }
            self.sigma_pow.push(next);
        }
        self.sigma_pow.truncate(r.max(1));
    }

    fn apply_linear(&self, images: &[Gr; MAX_R], a: Gr) -> Gr {
        let mut acc = Gr::ZERO;
        for (&x, &img) in a.0[..self.r].iter().zip(images) {
            if x != 0 {
                acc = self.add(acc, self.mul(self.from_int(x as i64), img));
            }
        }
        acc
    }

    /// `sigma^k(a)` for any integer `k` (negative powers allowed).
    pub fn sigma_pow(&self, a: Gr, k: i64) -> Gr {
        if self.r == 1 {
            return a;
        }
        let k = k.rem_euclid(self.r as i64) as usize;
        if k == 0 {
            return a;
        }
        self.apply_linear(&self.sigma_pow[k], a)
    }

    /// The Frobenius automorphism, lifting `a -> a^p` on the residue field.
    pub fn sigma(&self, a: Gr) -> Gr {
        self.sigma_pow(a, 1)
    }

    pub fn sigma_inv(&self, a: Gr) -> Gr {
        self.sigma_pow(a, -1)
    }

    /// The Teichmüller representative of the residue class of `a`.
    pub fn teichmuller(&self, a: Gr) -> Gr {
        let q = (self.p as u128).pow(self.r as u32);
        let mut t = self.reduce(a, 1);
        for _ in 1..self.m {
            t = self.pow(t, q);
        }
        t
    }

    /// Iterates all elements of the residue field as representatives `< p`.
    pub fn residues(&self) -> impl Iterator<Item = Gr> + '_ {
        let total = self.p.pow(self.r as u32);
        (0..total).map(move |mut n| {
            let mut g = Gr::ZERO;
            for i in 0..self.r {
                g.0[i] = n % self.p;
                n /= self.p;
            }
            g
        })
    }

    /// Lifts an element from a ring of lower or equal precision.
    pub fn lift_from(&self, a: Gr) -> Gr {
        let mut c = a;
        for i in 0..self.r {
            c.0[i] %= self.modulus;
        }
        c
    }

    pub fn fmt_elt(&self, a: Gr) -> String {
        if self.r == 1 {
            return a.0[0].to_string();
        }
        let parts: Vec<String> = (0..self.r).map(|i| a.0[i].to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}
