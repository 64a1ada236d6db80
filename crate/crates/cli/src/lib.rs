//! The `hodge-witt` command line: invariants of a module spec, star products,
//! consistency checks and the counterexample report.
//!
//! Exit codes: 0 success, 1 a violated check or refused computation, 2 a
//! malformed input or flag, 3 an invariant that did not stabilize.

use std::fs;
use std::io::Read as _;

use balphap::{counterexample_report, BalphapError, ExtensionPolicy, ReportConfig, CERTIFIED_DEGREE};
use clap::{Parser, Subcommand, ValueEnum};
use invariants::{hodge_witt_numbers, run_checks, InvError, InvariantTable, Trunc};
use rmod_core::{check_relations, BlockModule, CoreError, FormalObject, ModuleSpec};
use serde_json::{json, Value};
use star::{candidates, derived_star, identify, star_blocks, star_frobenius_bijective, StarError};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSTABLE: i32 = 3;

const PRIMES: [u64; 4] = [2, 3, 5, 7];
const MAX_R: usize = 4;
const MAX_PRECISION: u32 = 32;
const MAX_VDEPTH: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    #[value(alias = "markdown")]
    Md,
}

#[derive(Debug, Parser)]
#[command(name = "hodge-witt", version, about = "Hodge-Witt invariants of graded modules over the Cartier-Dieudonne-Raynaud ring")]
pub struct Cli {
    /// Prime; must agree with the module file when both are given.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Degree of the residue field over F_p.
    #[arg(long, global = true)]
    pub r: Option<usize>,
    /// Witt vector precision m.
    #[arg(long, global = true, default_value_t = 8)]
    pub precision: u32,
    /// V-filtration depth n.
    #[arg(long, global = true, default_value_t = 16)]
    pub vdepth: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hodge, domino, slope and Hodge-Witt numbers of a JSON module spec.
    Invariants {
        /// Spec file, or `-` for standard input.
        spec: String,
    },
    /// Star product of two single-block specs.
    Star {
        left: String,
        right: String,
        /// Derived star `E ⋆̂ N` for a Dieudonne block `E`.
        #[arg(long)]
        derived: bool,
        /// Also compute the closed form, which needs `F` bijective on one factor.
        #[arg(long, conflicts_with = "derived")]
        closed: bool,
    },
    /// The counterexample report.
    Report {
        #[arg(long, default_value = "paper-nonsplit")]
        mode: String,
        #[arg(long, default_value_t = CERTIFIED_DEGREE)]
        degree_bound: u32,
    },
    /// Crew, Ekedahl, polygon, symmetry and Mazur-Ogus checks on a spec.
    Check {
        spec: String,
        /// Dimension for the symmetry checks; when given they count towards the exit code.
        #[arg(long)]
        dim: Option<i64>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Violation(String),
    #[error("{0}")]
    Unstable(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Violation(_) => EXIT_VIOLATION,
            CliError::Unstable(_) => EXIT_UNSTABLE,
        }
    }
}

impl From<InvError> for CliError {
    fn from(e: InvError) -> Self {
        match e {
            InvError::Unstable { .. } => CliError::Unstable(e.to_string()),
            other => CliError::Violation(other.to_string()),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Violation(e.to_string())
    }
}

impl From<StarError> for CliError {
    fn from(e: StarError) -> Self {
        CliError::Violation(e.to_string())
    }
}

impl From<BalphapError> for CliError {
    fn from(e: BalphapError) -> Self {
        match e {
            BalphapError::Invariants(inner) => inner.into(),
            BalphapError::UnknownPolicy(_) => CliError::Parse(e.to_string()),
            other => CliError::Violation(other.to_string()),
        }
    }
}

/// What a successful or failed-check run prints, and its exit code.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{path}: {e}")))
    }
}

impl Cli {
    fn trunc(&self) -> Result<Trunc, CliError> {
        if self.precision == 0 || self.precision > MAX_PRECISION {
            return Err(CliError::Parse(format!("--precision must lie in 1..={MAX_PRECISION}")));
        }
        if self.vdepth < 2 || self.vdepth > MAX_VDEPTH {
            return Err(CliError::Parse(format!("--vdepth must lie in 2..={MAX_VDEPTH}")));
        }
        Ok(Trunc { m: self.precision, n: self.vdepth })
    }

    fn check_field(&self, p: u64, r: usize) -> Result<(), CliError> {
        if !PRIMES.contains(&p) {
            return Err(CliError::Parse(format!("p = {p} is not one of {PRIMES:?}")));
        }
        if r == 0 || r > MAX_R {
            return Err(CliError::Parse(format!("r = {r} must lie in 1..={MAX_R}")));
        }
        if self.p.is_some_and(|q| q != p) || self.r.is_some_and(|s| s != r) {
            return Err(CliError::Parse(format!("spec is over (p={p}, r={r}) but the flags ask for another field")));
        }
        Ok(())
    }

    fn load(&self, path: &str) -> Result<FormalObject, CliError> {
        let text = read_input(path)?;
        let spec: ModuleSpec = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
        self.check_field(spec.p, spec.r)?;
        FormalObject::from_spec(&spec).map_err(|e| match e {
            CoreError::BadFiniteLength(_) => CliError::Violation(format!("{path}: {e}")),
            other => CliError::Parse(format!("{path}: {other}")),
        })
    }

    fn load_block(&self, path: &str) -> Result<BlockModule, CliError> {
        let x = self.load(path)?;
        match x.summands() {
            [s] if s.shift == (0, 0) => Ok(s.block.clone()),
            _ => Err(CliError::Parse(format!("{path}: expected a single unshifted block"))),
        }
    }
}

/// Sorted-key JSON, pretty-printed.
fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn grid_bound(t: &InvariantTable) -> i64 {
    t.support().iter().filter(|c| c.0 >= 0 && c.1 >= 0).map(|c| c.0 + c.1).max().unwrap_or(0)
}

fn cmd_invariants(cli: &Cli, spec: &str) -> Result<Outcome, CliError> {
    let trunc = cli.trunc()?;
    let x = cli.load(spec)?;
    for s in x.summands() {
        let t = s.block.truncate(trunc.m, trunc.n)?;
        let rep = check_relations(&t);
        if !rep.is_pass() {
            return Err(CliError::Violation(format!("{}: {rep}", s.block.name())));
        }
    }
    let table = hodge_witt_numbers(&x, trunc)?;
    if !invariants::checks::formula_consistent(&table) {
        return Err(CliError::Violation("h_W disagrees with its defining formula".into()));
    }
    let stdout = match cli.format {
        Format::Json => render(&to_value(&table.to_json())),
        Format::Md => {
            let mut s = table.to_markdown(grid_bound(&table));
            let outside: Vec<String> =
                table.h_w.iter().filter(|(c, _)| c.0 < 0 || c.1 < 0).map(|(c, v)| format!("({}, {}): {v}", c.0, c.1)).collect();
            if !outside.is_empty() {
                s.push_str(&format!("\nh_W outside the grid: {}\n", outside.join(", ")));
            }
            s
        }
    };
    Ok(Outcome { code: EXIT_OK, stdout })
}

fn cmd_star(cli: &Cli, left: &str, right: &str, derived: bool, closed: bool) -> Result<Outcome, CliError> {
    let Trunc { m, n } = cli.trunc()?;
    let (a, b) = (cli.load_block(left)?, cli.load_block(right)?);
    if a.p() != b.p() || a.r() != b.r() {
        return Err(CliError::Parse("the two specs live over different fields".into()));
    }
    if derived {
        let ds = derived_star(&a, &b, m, n)?;
        let name = |h: &star::Identified| h.name().unwrap_or_else(|| "unidentified".into());
        let (hm1, h0) = (name(&ds.h_minus1), name(&ds.h0));
        let stdout = match cli.format {
            Format::Json => render(&json!({
                "left": a.name(),
                "right": b.name(),
                "level": [m, n],
                "H^-1": { "name": hm1, "status": ds.h_minus1.status(), "lengths": ds.h_minus1.module.lengths() },
                "H^0": { "name": h0, "status": ds.h0.status(), "lengths": ds.h0.module.lengths() },
                "kernel_bands": to_value(&ds.kernel_bands),
            })),
            Format::Md => format!("H^-1: {hm1}, H^0: {h0}\n"),
        };
        return Ok(Outcome { code: EXIT_OK, stdout });
    }
    let sp = star_blocks(&a, &b, m, n)?;
    let found = if a.r() == 1 { identify(&sp.module, &candidates(a.p(), &[a.clone(), b.clone()])?).name() } else { None };
    let closed_lengths = if closed {
        let (ta, tb) = (a.truncate(m, n)?, b.truncate(m, n)?);
        // the product is symmetric up to the signed swap, so either factor may carry the bijective F
        let tf = match star_frobenius_bijective(&ta, &tb, n) {
            Err(StarError::Inapplicable(_)) => star_frobenius_bijective(&tb, &ta, n)?,
            other => other?,
        };
        Some(tf.module.lengths())
    } else {
        None
    };
    let stdout = match cli.format {
        Format::Json => render(&json!({
            "left": a.name(),
            "right": b.name(),
            "level": [m, n],
            "identified": found,
            "lengths": sp.module.lengths(),
            "exponents": sp.module.exponents(),
            "closed_form_lengths": closed_lengths,
            "module": to_value(&sp.module.to_json()),
        })),
        Format::Md => {
            let mut s = format!("{} * {} at (m, n) = ({m}, {n})\n\n", a.name(), b.name());
            s.push_str(&format!("- identified: {}\n", found.unwrap_or_else(|| "none".into())));
            for (g, e) in sp.module.exponents() {
                s.push_str(&format!("- grading {g}: exponents {e:?}\n"));
            }
            if let Some(l) = closed_lengths {
                s.push_str(&format!("- closed form lengths: {l:?}\n"));
            }
            s
        }
    };
    Ok(Outcome { code: EXIT_OK, stdout })
}

fn cmd_report(cli: &Cli, mode: &str, degree_bound: u32) -> Result<Outcome, CliError> {
    let Trunc { m, n } = cli.trunc()?;
    let p = cli.p.unwrap_or(2);
    cli.check_field(p, cli.r.unwrap_or(1))?;
    if cli.r.is_some_and(|r| r != 1) {
        return Err(CliError::Violation("the report is computed over F_p only (r = 1)".into()));
    }
    let policy: ExtensionPolicy = mode.parse().map_err(|e: BalphapError| CliError::Parse(e.to_string()))?;
    let report = counterexample_report(ReportConfig { p, m, n, policy, degree_bound })?;
    let stdout = match cli.format {
        Format::Json => render(&to_value(&report.to_json())),
        Format::Md => report.to_markdown(),
    };
    let code = if report.pass() { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Outcome { code, stdout })
}

fn cmd_check(cli: &Cli, spec: &str, dim: Option<i64>) -> Result<Outcome, CliError> {
    let trunc = cli.trunc()?;
    let x = cli.load(spec)?;
    let (table, report) = run_checks(&x, trunc, dim)?;
    let symmetry_ok = report.symmetry.as_ref().is_none_or(|s| s.pass());
    let pass = report.pass() && symmetry_ok;
    let stdout = match cli.format {
        Format::Json => render(&json!({
            "pass": pass,
            "report": to_value(&report),
            "hW": to_value(&table.to_json().h_w),
        })),
        Format::Md => {
            let mark = |b: bool| if b { "pass" } else { "FAIL" };
            let mut s = table.to_markdown(grid_bound(&table));
            s.push('\n');
            s.push_str(&format!("- Crew: {}\n", mark(report.crew.iter().all(|c| c.pass()))));
            s.push_str(&format!("- Ekedahl: {}\n", mark(report.ekedahl.pass())));
            s.push_str(&format!("- Newton-Hodge below Newton: {}\n", mark(report.newton_hodge.iter().all(|c| c.pass()))));
            if let Some(sym) = &report.symmetry {
                s.push_str(&format!("- symmetry (N = {}): {}\n", sym.dim, mark(sym.pass())));
            }
            s.push_str(&format!("- Mazur-Ogus: {}\n", mark(report.mazur_ogus.iter().all(|c| c.pass()))));
            s
        }
    };
    Ok(Outcome { code: if pass { EXIT_OK } else { EXIT_VIOLATION }, stdout })
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Invariants { spec } => cmd_invariants(cli, spec),
        Command::Star { left, right, derived, closed } => cmd_star(cli, left, right, *derived, *closed),
        Command::Report { mode, degree_bound } => cmd_report(cli, mode, *degree_bound),
        Command::Check { spec, dim } => cmd_check(cli, spec, *dim),
    }
}
