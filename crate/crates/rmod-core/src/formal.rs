//! Finite formal sums of shifted blocks `Σ M_a(i_a)[j_a]`.
//!
//! Grading convention: `M(n)^i = M^{i+n}` and `H^n(M(i)[j])^m = H^{n+j}(M)^{m+i}`,
//! so a block cell at grading `g` and cohomological degree `c` of `M_a`
//! appears at `(g - i_a, c - j_a)` in the sum.

use serde::{Deserialize, Serialize};

use crate::block::{make_block, BlockKind, BlockModule};
use crate::error::CoreError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub block: BlockModule,
    /// `(i, j)` in `M(i)[j]`.
    pub shift: (i64, i64),
}

impl Summand {
    /// Position of a block cell `(g, c)` after shifting.
    pub fn place(&self, g: i64, c: i64) -> (i64, i64) {
        (g - self.shift.0, c - self.shift.1)
    }

    /// Name with the grading twist, e.g. `W(-1)`.
    pub fn twisted_name(&self) -> String {
        let base = self.block.name();
        if self.shift.0 == 0 {
            base
        } else {
            format!("{base}({})", self.shift.0)
        }
    }

    /// Cohomological degree the block sits in.
    pub fn degree(&self) -> i64 {
        -self.shift.1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalObject {
    p: u64,
    r: usize,
    summands: Vec<Summand>,
}

impl FormalObject {
    pub fn empty(p: u64, r: usize) -> Self {
        FormalObject { p, r, summands: Vec::new() }
    }

    pub fn single(block: BlockModule) -> Self {
        Self::single_at(block, 0, 0)
    }

    pub fn single_at(block: BlockModule, i: i64, j: i64) -> Self {
        FormalObject { p: block.p(), r: block.r(), summands: vec![Summand { block, shift: (i, j) }] }
    }

    /// Convenience: `kind(i)[j]` as a one-term object.
    pub fn of(kind: BlockKind, p: u64, r: usize, i: i64, j: i64) -> Result<Self, CoreError> {
        Ok(Self::single_at(make_block(kind, p, r)?, i, j))
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }
    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn push(&mut self, block: BlockModule, i: i64, j: i64) -> Result<(), CoreError> {
        if (block.p(), block.r()) != (self.p, self.r) {
            return Err(CoreError::Mismatch(format!(
                "block over (p={}, r={}) added to object over (p={}, r={})",
                block.p(),
                block.r(),
                self.p,
                self.r
            )));
        }
        self.summands.push(Summand { block, shift: (i, j) });
        Ok(())
    }

    /// `X(i)[j]`.
    pub fn shift(&self, i: i64, j: i64) -> FormalObject {
        let summands = self
            .summands
            .iter()
            .map(|s| Summand { block: s.block.clone(), shift: (s.shift.0 + i, s.shift.1 + j) })
            .collect();
        FormalObject { p: self.p, r: self.r, summands }
    }

    pub fn direct_sum(&self, other: &FormalObject) -> Result<FormalObject, CoreError> {
        if other.is_empty() {
            return Ok(self.clone());
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        if (self.p, self.r) != (other.p, other.r) {
            return Err(CoreError::Mismatch(format!(
                "(p={}, r={}) vs (p={}, r={})",
                self.p, self.r, other.p, other.r
            )));
        }
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        Ok(FormalObject { p: self.p, r: self.r, summands })
    }

    /// Summands as a multiset of `(name, shift)`, for order-insensitive comparison.
    pub fn canonical(&self) -> Vec<(String, i64, i64)> {
        let mut v: Vec<(String, i64, i64)> =
            self.summands.iter().map(|s| (s.block.name(), s.shift.0, s.shift.1)).collect();
        v.sort();
        v
    }

    /// Cohomological degrees present, sorted.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.summands.iter().map(|s| s.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn to_spec(&self) -> ModuleSpec {
        ModuleSpec {
            p: self.p,
            r: self.r,
            object: self
                .summands
                .iter()
                .map(|s| SpecSummand { block: s.block.kind().clone(), shift: [s.shift.0, s.shift.1] })
                .collect(),
        }
    }

    pub fn from_spec(spec: &ModuleSpec) -> Result<FormalObject, CoreError> {
        let mut out = FormalObject::empty(spec.p, spec.r);
        for s in &spec.object {
            let b = make_block(s.block.clone(), spec.p, spec.r)?;
            out.push(b, s.shift[0], s.shift[1])?;
        }
        Ok(out)
    }
}

fn default_r() -> usize {
    1
}

/// JSON module spec: `{"p":2,"r":1,"object":[{"block":{"kind":"Domino","t":0},"shift":[0,0]}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub p: u64,
    #[serde(default = "default_r")]
    pub r: usize,
    pub object: Vec<SpecSummand>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecSummand {
    pub block: BlockKind,
    #[serde(default)]
    pub shift: [i64; 2],
}
