//! End-to-end run: second page, extension, tables, invariants and checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use invariants::{crew_all, ekedahl_check, hodge_witt_numbers, CrewCheck, EkedahlCheck, InvariantTable, Trunc};
use serde::Serialize;

use crate::error::{BalphapError, Result};
use crate::extension::{resolve_extension, ExtensionPolicy, ResolvedExtension};
use crate::row2::{row2_e2, Row2Ses};
use crate::table::{assemble_balphap_table, e2_page, twist_bgm, CohomologyTable, E2Page, CERTIFIED_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportConfig {
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub policy: ExtensionPolicy,
    pub degree_bound: u32,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { p: 2, m: 8, n: 16, policy: ExtensionPolicy::PaperNonsplit, degree_bound: CERTIFIED_DEGREE }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryLe2 {
    pub pass: bool,
    /// `h_W^{i,j} - h_W^{j,i}` where nonzero, `i + j ≤ 2`.
    pub deltas: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymmetryDeg3 {
    pub pass: bool,
    pub h03: i64,
    pub h30: i64,
    pub difference: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportChecks {
    pub crew: Vec<CrewCheck>,
    pub ekedahl: EkedahlCheck,
    pub symmetry_le2: SymmetryLe2,
    /// Absent when the degree bound is below 3.
    pub asymmetry_deg3: Option<AsymmetryDeg3>,
}

impl ReportChecks {
    pub fn pass(&self) -> bool {
        self.crew.iter().all(CrewCheck::pass)
            && self.ekedahl.pass()
            && self.symmetry_le2.pass
            && self.asymmetry_deg3.as_ref().is_none_or(|a| a.pass)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub config: ReportConfig,
    pub page: E2Page,
    pub row2: Row2Ses,
    pub extension: ResolvedExtension,
    pub balphap: CohomologyTable,
    pub table: CohomologyTable,
    pub invariants: InvariantTable,
    pub checks: ReportChecks,
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationJson {
    pub p: u64,
    pub m: u32,
    pub n: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportJson {
    pub mode: String,
    pub watermark: Option<&'static str>,
    pub provenance: Option<&'static str>,
    pub degree_bound: u32,
    pub e2: BTreeMap<String, String>,
    pub ses: [String; 3],
    pub balphap: BTreeMap<String, String>,
    pub table: BTreeMap<String, String>,
    #[serde(rename = "hW")]
    pub h_w: BTreeMap<String, i64>,
    pub checks: ReportChecks,
    pub pass: bool,
    pub truncation: TruncationJson,
}

fn key((i, j): (i64, i64)) -> String {
    format!("{i},{j}")
}

fn checks_for(t: &InvariantTable, bound: i64) -> ReportChecks {
    let mut deltas = BTreeMap::new();
    for n in 0..=bound.min(2) {
        for i in 0..=n {
            let d = t.hw(i, n - i) - t.hw(n - i, i);
            if d != 0 {
                deltas.insert(key((i, n - i)), d);
            }
        }
    }
    let asymmetry_deg3 = (bound >= 3).then(|| {
        let (h03, h30) = (t.hw(0, 3), t.hw(3, 0));
        AsymmetryDeg3 { pass: h03 != h30, h03, h30, difference: h03 - h30 }
    });
    ReportChecks {
        crew: crew_all(t),
        ekedahl: ekedahl_check(t),
        symmetry_le2: SymmetryLe2 { pass: deltas.is_empty(), deltas },
        asymmetry_deg3,
    }
}

/// Runs the whole pipeline.
pub fn counterexample_report(config: ReportConfig) -> Result<Report> {
    if config.degree_bound > CERTIFIED_DEGREE {
        return Err(BalphapError::NotCertified(config.degree_bound));
    }
    let ReportConfig { p, m, n, policy, degree_bound } = config;
    let row2 = row2_e2(p, m, n)?;
    if !row2.connecting.vanishes {
        return Err(BalphapError::Failed("the connecting map is not certified to vanish".into()));
    }
    let extension = resolve_extension(policy, p)?;
    let page = e2_page(p, m, n, &row2, &extension, degree_bound)?;
    let balphap = assemble_balphap_table(&page, degree_bound)?;
    let table = twist_bgm(&balphap)?;
    let invariants = hodge_witt_numbers(&table.object, Trunc { m, n })?;
    let checks = checks_for(&invariants, degree_bound as i64);
    Ok(Report { config, page, row2, extension, balphap, table, invariants, checks })
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.pass()
    }

    /// `h_W^{i,j}` for `i, j ≥ 0`, `i + j ≤ bound`, zeros included.
    pub fn hw_cells(&self) -> BTreeMap<(i64, i64), i64> {
        let b = self.table.bound;
        (0..=b).flat_map(|d| (0..=d).map(move |i| (i, d - i))).map(|c| (c, self.invariants.hw(c.0, c.1))).collect()
    }

    pub fn to_json(&self) -> ReportJson {
        let names = |t: &CohomologyTable| t.cells().into_iter().map(|(c, s)| (key(c), s)).collect();
        let ses = [self.row2.left_name(), self.e2_12_name(), self.row2.right_name()];
        ReportJson {
            mode: self.config.policy.to_string(),
            watermark: self.extension.watermark(),
            provenance: self.extension.provenance,
            degree_bound: self.config.degree_bound,
            e2: self.page.cells.iter().filter(|(c, _)| c.0 + c.1 <= self.table.bound).map(|(&c, x)| (key(c), x.name())).collect(),
            ses,
            balphap: names(&self.balphap),
            table: names(&self.table),
            h_w: self.hw_cells().into_iter().map(|(c, v)| (key(c), v)).collect(),
            checks: self.checks.clone(),
            pass: self.pass(),
            truncation: TruncationJson { p: self.config.p, m: self.config.m, n: self.config.n },
        }
    }

    fn e2_12_name(&self) -> String {
        self.page.get(1, 2).map_or_else(|| "?".into(), |c| c.name())
    }

    /// The `h_W` grid in the usual layout: `j` upwards, `i` to the right.
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        if let Some(w) = self.extension.watermark() {
            let _ = writeln!(s, "> **{}**: the extension class is forced to zero.\n", w.to_uppercase());
        }
        let _ = writeln!(s, "# Hodge-Witt report (mode `{}`)\n", self.config.policy);
        let _ = writeln!(s, "p = {}, truncation (m, n) = ({}, {})\n", self.config.p, self.config.m, self.config.n);
        if let Some(p) = self.extension.provenance {
            let _ = writeln!(s, "_{p}_\n");
        }
        let _ = writeln!(s, "## E2 page\n");
        let _ = writeln!(s, "| (a, b) | E2 |\n|---|---|");
        for (&(a, b), c) in &self.page.cells {
            if a + b <= self.table.bound {
                let _ = writeln!(s, "| ({a}, {b}) | {} |", c.name());
            }
        }
        let _ = writeln!(s, "\nE2^(1,2): 0 -> {} -> {} -> {} -> 0\n", self.row2.left_name(), self.e2_12_name(), self.row2.right_name());
        let _ = writeln!(s, "## Hodge-Witt cohomology\n");
        let _ = writeln!(s, "| (i, j) | H^j(WΩ)^[i,i] |\n|---|---|");
        for ((i, j), name) in self.table.cells() {
            let _ = writeln!(s, "| ({i}, {j}) | {name} |");
        }
        let _ = writeln!(s, "\n## h_W^(i,j)\n");
        s.push_str(&self.invariants.to_markdown(self.table.bound));
        let _ = writeln!(s, "\n## Checks\n");
        let crew = self.checks.crew.iter().all(CrewCheck::pass);
        let _ = writeln!(s, "- Crew's formula per column: {}", if crew { "pass" } else { "FAIL" });
        let _ = writeln!(s, "- Ekedahl inequality: {}", if self.checks.ekedahl.pass() { "pass" } else { "FAIL" });
        let _ = writeln!(s, "- symmetry for i + j <= 2: {}", if self.checks.symmetry_le2.pass { "pass" } else { "FAIL" });
        if let Some(a) = &self.checks.asymmetry_deg3 {
            let _ = writeln!(s, "- degree 3: h_W^(0,3) - h_W^(3,0) = {} - {} = {}", a.h03, a.h30, a.difference);
        }
        s
    }
}
