//! Künneth decomposition of reduced cohomology: `H̃^n` of a product is the
//! sum over `i_1 + ... + i_k = n` of the star products of the factors'
//! `H̃^{i_a}`.

use std::collections::BTreeMap;

use rmod_core::{make_block, BlockKind, BlockModule, FormalObject};

use crate::error::{BalphapError, Result};

/// Reduced cohomology of one factor, degree by degree.
#[derive(Clone, Debug)]
pub struct Factor {
    pub name: String,
    pub degrees: BTreeMap<i64, FormalObject>,
}

/// One Künneth summand: a star product of blocks, twisted and shifted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTerm {
    /// `(factor index, degree)` for every factor contributing in nonzero degree.
    pub parts: Vec<(usize, i64)>,
    /// Non-unit blocks in factor order; the unit `W` is absorbed.
    pub blocks: Vec<BlockModule>,
    /// `(i, j)` in `(...)(i)[j]`.
    pub shift: (i64, i64),
}

impl KTerm {
    pub fn name(&self) -> String {
        let mut s = match self.blocks.len() {
            0 => "W".to_string(),
            1 => self.blocks[0].name(),
            _ => format!("({})", self.blocks.iter().map(BlockModule::name).collect::<Vec<_>>().join(" * ")),
        };
        if self.shift.0 != 0 {
            s.push_str(&format!("({})", self.shift.0));
        }
        if self.shift.1 != 0 {
            s.push_str(&format!("[{}]", self.shift.1));
        }
        s
    }

    /// The term as a formal object, when it is a single block.
    pub fn resolve(&self, p: u64) -> Result<FormalObject> {
        let block = match self.blocks.len() {
            0 => make_block(BlockKind::UnitW, p, 1)?,
            1 => self.blocks[0].clone(),
            _ => return Err(BalphapError::Unresolved(self.name())),
        };
        Ok(FormalObject::single_at(block, self.shift.0, self.shift.1))
    }

    /// Whether factor `k` contributes in degree `d`.
    pub fn uses(&self, k: usize, d: i64) -> bool {
        self.parts.contains(&(k, d))
    }
}

pub type KTable = BTreeMap<i64, Vec<KTerm>>;

/// A supersingular elliptic curve: `H̃^0 = W`, `H̃^1 = E_{1/2}`, `H̃^2 = W(-1)[1]`.
pub fn supersingular_curve(name: &str, p: u64) -> Result<Factor> {
    let mut degrees = BTreeMap::new();
    degrees.insert(0, FormalObject::of(BlockKind::UnitW, p, 1, 0, 0)?);
    degrees.insert(1, FormalObject::of(BlockKind::Dieudonne { i: 1, j: 1 }, p, 1, 0, 0)?);
    degrees.insert(2, FormalObject::of(BlockKind::UnitW, p, 1, -1, 1)?);
    Ok(Factor { name: name.to_string(), degrees })
}

/// Convolution of the factors' tables.
pub fn kunneth_tilde_h(factors: &[Factor]) -> Result<KTable> {
    let mut acc: Vec<(i64, KTerm)> = vec![(0, KTerm { parts: Vec::new(), blocks: Vec::new(), shift: (0, 0) })];
    let mut p = None;
    for (k, f) in factors.iter().enumerate() {
        let mut next = Vec::new();
        for (deg, term) in &acc {
            for (&d, obj) in &f.degrees {
                match p {
                    None => p = Some(obj.p()),
                    Some(q) if q != obj.p() => {
                        return Err(BalphapError::Unsupported(format!("factor {} lives over p = {}", f.name, obj.p())))
                    }
                    _ => {}
                }
                for s in obj.summands() {
                    let mut t = term.clone();
                    if d != 0 {
                        t.parts.push((k, d));
                    }
                    if *s.block.kind() != BlockKind::UnitW {
                        t.blocks.push(s.block.clone());
                    }
                    t.shift = (t.shift.0 + s.shift.0, t.shift.1 + s.shift.1);
                    next.push((deg + d, t));
                }
            }
        }
        acc = next;
    }
    let mut out: KTable = BTreeMap::new();
    for (deg, t) in acc {
        out.entry(deg).or_default().push(t);
    }
    for terms in out.values_mut() {
        terms.sort_by(|a, b| a.parts.cmp(&b.parts));
    }
    Ok(out)
}

/// `n` copies of `E` followed by `E^{(1)}`.
pub fn simplicial_column(p: u64, n: usize) -> Result<KTable> {
    let mut factors = Vec::with_capacity(n + 1);
    for k in 0..n {
        factors.push(supersingular_curve(&format!("E_{k}"), p)?);
    }
    factors.push(supersingular_curve("E^(1)", p)?);
    kunneth_tilde_h(&factors)
}
