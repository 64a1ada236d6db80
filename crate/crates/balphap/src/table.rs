//! The second page, the cohomology table of `Bα_p` in low degrees, and the
//! product with `B𝔾_m`.

use std::collections::BTreeMap;

use rmod_core::FormalObject;

use crate::error::{BalphapError, Result};
use crate::extension::ResolvedExtension;
use crate::kunneth::simplicial_column;
use crate::row2::Row2Ses;
use crate::rows::{e2_rows01, shifted_name, E2Cell};

/// Highest total degree the pipeline certifies.
pub const CERTIFIED_DEGREE: u32 = 3;

/// `E_2^{a,b}` keyed by `(a, b)`.
#[derive(Clone, Debug)]
pub struct E2Page {
    pub p: u64,
    pub cells: BTreeMap<(i64, i64), E2Cell>,
}

impl E2Page {
    pub fn get(&self, a: i64, b: i64) -> Option<&E2Cell> {
        self.cells.get(&(a, b))
    }

    /// Whether every differential `d_r`, `r ≥ 2`, touching a nonzero cell of
    /// total degree `≤ bound` has a zero source or target inside the page.
    pub fn degenerates_up_to(&self, bound: i64) -> bool {
        let zero = |a: i64, b: i64| a < 0 || b < 0 || self.get(a, b).is_some_and(|c| c.object.is_empty());
        self.cells.iter().filter(|(&(a, b), c)| a + b <= bound && !c.object.is_empty()).all(|(&(a, b), _)| {
            (2..=a + b + 2).all(|r| zero(a + r, b - r + 1) && zero(a - r, b + r - 1))
        })
    }
}

/// All cells of total degree `≤ bound`, plus the columns the degeneration
/// check needs.
pub fn e2_page(p: u64, m: u32, n: u32, row2: &Row2Ses, ext: &ResolvedExtension, bound: u32) -> Result<E2Page> {
    if bound > CERTIFIED_DEGREE {
        return Err(BalphapError::NotCertified(bound));
    }
    let last = CERTIFIED_DEGREE as usize + 2;
    let mut cells = e2_rows01(p, last, m, n)?;
    let zero = E2Cell::zero(p);
    let mut c02 = zero.clone();
    if !row2.e2_02_zero {
        return Err(BalphapError::Failed("E_2^{0,2} is not zero".into()));
    }
    c02.found = row2.quot_a.clone();
    cells.insert((0, 2), c02);
    let mut c12 = zero.clone();
    c12.object = ext.object.clone();
    cells.insert((1, 2), c12);
    // column 0 of row j is H^j(E^(1)), which vanishes for j > 2
    for j in 3..=CERTIFIED_DEGREE as i64 {
        if simplicial_column(p, 0)?.contains_key(&j) {
            return Err(BalphapError::Failed(format!("column 0 of row {j} is not zero")));
        }
        cells.insert((0, j), zero.clone());
    }
    Ok(E2Page { p, cells })
}

/// Cohomology in degrees `≤ bound`, as a formal object whose summand
/// `M(-i)[-j]` sits in cell `(i, j)`.
#[derive(Clone, Debug)]
pub struct CohomologyTable {
    pub object: FormalObject,
    pub bound: i64,
}

impl CohomologyTable {
    /// Cell names for `i, j ≥ 0`, `i + j ≤ bound`.
    pub fn cells(&self) -> BTreeMap<(i64, i64), String> {
        let mut out: BTreeMap<(i64, i64), Vec<String>> = BTreeMap::new();
        for s in self.object.summands() {
            let (i, j) = (-s.shift.0, -s.shift.1);
            if i >= 0 && j >= 0 && i + j <= self.bound {
                let mut t = s.clone();
                t.shift.1 = 0;
                out.entry((i, j)).or_default().push(shifted_name(&t));
            }
        }
        out.into_iter().map(|(k, v)| (k, v.join(" + "))).collect()
    }
}

/// `H^j(WΩ(Bα_p))^{[i,i]}` for `i + j ≤ bound`.
pub fn assemble_balphap_table(page: &E2Page, bound: u32) -> Result<CohomologyTable> {
    if bound > CERTIFIED_DEGREE {
        return Err(BalphapError::NotCertified(bound));
    }
    let bound = bound as i64;
    if !page.degenerates_up_to(bound) {
        return Err(BalphapError::Failed("the spectral sequence is not certified to degenerate".into()));
    }
    let mut object = FormalObject::empty(page.p, 1);
    for (&(a, b), cell) in &page.cells {
        let deg = a + b;
        if deg > bound {
            continue;
        }
        for s in cell.object.summands() {
            object.push(s.block.clone(), s.shift.0, s.shift.1 - deg)?;
        }
    }
    Ok(CohomologyTable { object, bound })
}

/// Product with `B𝔾_m`: the sum of `X(-k)[-k]` over `k ≤ bound`.
pub fn twist_bgm(table: &CohomologyTable) -> Result<CohomologyTable> {
    let mut object = FormalObject::empty(table.object.p(), table.object.r());
    for k in 0..=table.bound {
        object = object.direct_sum(&table.object.shift(-k, -k))?;
    }
    Ok(CohomologyTable { object, bound: table.bound })
}
