use std::collections::BTreeMap;
use std::time::Instant;

use balphap::*;
use invariants::{hodge_witt_numbers, Trunc};
use proptest::prelude::*;
use rmod_core::{make_block, BlockKind, FormalObject};

fn names(t: &KTable, d: i64) -> Vec<String> {
    let mut v: Vec<String> = t.get(&d).map(|x| x.iter().map(KTerm::name).collect()).unwrap_or_default();
    v.sort();
    v
}

#[test]
fn kunneth_examples() {
    let e = supersingular_curve("E", 3).unwrap();
    let e1 = supersingular_curve("E1", 3).unwrap();
    let t = kunneth_tilde_h(&[e.clone(), e.clone()]).unwrap();
    assert_eq!(names(&t, 0), vec!["W"]);
    assert_eq!(names(&t, 1), vec!["E_{1/2}", "E_{1/2}"]);
    let t = kunneth_tilde_h(&[e, e1]).unwrap();
    assert_eq!(names(&t, 2), vec!["(E_{1/2} * E_{1/2})", "W(-1)[1]", "W(-1)[1]"]);
    for n in 0..4 {
        assert_eq!(names(&simplicial_column(2, n).unwrap(), 0), vec!["W"]);
    }
}

#[test]
fn unresolved_products_are_reported() {
    let t = simplicial_column(2, 1).unwrap();
    let star = t[&2].iter().find(|x| x.blocks.len() == 2).unwrap();
    assert!(matches!(star.resolve(2), Err(BalphapError::Unresolved(_))));
}

/// Independent oracle for the row-1 differential: the displayed closed forms
/// for even and odd target columns.
fn row1_oracle(n: usize) -> Vec<Vec<Coef>> {
    let z = Coef { id: 0, g: 0 };
    let x = |c| Coef { id: c, g: 0 };
    let g = |c| Coef { id: 0, g: c };
    // rows: outputs x_0..x_{n-1}, y; columns: inputs x_0..x_{n-2}, y
    let mut m = vec![vec![z; n]; n + 1];
    let y_in = n - 1;
    if n.is_multiple_of(2) {
        let mut k = 1;
        while k + 1 < n - 1 {
            m[k][k] = x(1);
            m[k + 1][k] = x(1);
            k += 2;
        }
        m[n - 1][y_in] = g(1);
        m[n][y_in] = x(1);
    } else {
        m[0][0] = x(-1);
        let mut k = 2;
        while k < n {
            m[k][k - 1] = x(1);
            if k < n - 1 {
                m[k][k] = x(-1);
            }
            k += 2;
        }
        if n >= 3 {
            m[n - 1][y_in] = g(-1);
        } else {
            m[0][y_in] = g(-1);
        }
    }
    m
}

#[test]
fn row_one_matches_closed_forms() {
    for n in 1..=8 {
        assert_eq!(row01_alternating_maps(1, n).unwrap(), row1_oracle(n), "column {n}");
    }
}

#[test]
fn rows_compose_to_zero() {
    for p in [2, 3, 5] {
        for row in [0, 1] {
            let r = material_row(p, row, 6, 3, 6).unwrap();
            assert!(r.is_complex(), "p={p} row={row}");
        }
    }
}

#[test]
fn e2_rows_zero_and_one() {
    for p in [2, 3, 5] {
        let cells = e2_rows01(p, 4, 3, 8).unwrap();
        for (&(a, b), c) in &cells {
            let want = match (a, b) {
                (0, 0) => "W",
                (1, 1) => "D(alpha_p)",
                _ => "0",
            };
            assert_eq!(c.name(), want, "E2^({a},{b}) at p={p}");
        }
    }
}

#[test]
fn row_two() {
    for p in [2, 3] {
        let r = row2_e2(p, 3, 8).unwrap();
        assert!(r.e2_02_zero);
        assert!(r.quot_a.is_zero());
        assert_eq!(r.quot_b.name().as_deref(), Some("k"));
        assert_eq!(r.sub_b.name().as_deref(), Some("U_-1"));
        assert_eq!(r.sub_c.name().as_deref(), Some("U_1"));
        assert_eq!(r.left_name(), "U_-1");
        assert_eq!(r.right_name(), "k(-1)[1]");
        assert!(r.connecting.vanishes);
        // T^0 = 1 and T^1 = 0 for both possible middle terms
        for t in &r.middle_dominoes {
            assert_eq!(t.get(&0).copied().unwrap_or(0), 1);
            assert_eq!(t.get(&1).copied().unwrap_or(0), 0);
        }
    }
}

#[test]
fn extension_policies() {
    let e = resolve_extension(ExtensionPolicy::PaperNonsplit, 3).unwrap();
    assert!(e.cone_verified);
    assert_eq!(e.object.canonical(), vec![("U_0".to_string(), 0, 0)]);
    assert!(e.provenance.is_some());
    assert_eq!(e.watermark(), None);
    let s = resolve_extension(ExtensionPolicy::Split, 3).unwrap();
    let mut c = s.object.canonical();
    c.sort();
    assert_eq!(c, vec![("U_-1".to_string(), 0, 0), ("k".to_string(), -1, 1)]);
    assert_eq!(s.watermark(), Some(COUNTERFACTUAL));
    assert!(matches!(resolve_extension_named("maybe", 3), Err(BalphapError::UnknownPolicy(_))));
}

fn cells(t: &CohomologyTable) -> BTreeMap<(i64, i64), String> {
    t.cells()
}

#[test]
fn balphap_table_and_twist() {
    let r = counterexample_report(ReportConfig { p: 3, m: 4, n: 8, ..Default::default() }).unwrap();
    let want: BTreeMap<(i64, i64), String> =
        [((0, 0), "W"), ((0, 2), "D(alpha_p)"), ((0, 3), "U_0")].into_iter().map(|(c, s)| (c, s.to_string())).collect();
    assert_eq!(cells(&r.balphap), want);
    let mut want = want;
    want.insert((1, 1), "W(-1)".into());
    assert_eq!(cells(&r.table), want);
}

#[test]
fn twist_of_a_point_is_the_ladder() {
    let point = CohomologyTable { object: FormalObject::of(BlockKind::UnitW, 2, 1, 0, 0).unwrap(), bound: 3 };
    let t = twist_bgm(&point).unwrap();
    let mut c = t.object.canonical();
    c.sort();
    let mut want: Vec<(String, i64, i64)> = (0..=3).map(|n| ("W".to_string(), -n, -n)).collect();
    want.sort();
    assert_eq!(c, want);
}

#[test]
fn degree_bound_above_three_is_refused() {
    let e = counterexample_report(ReportConfig { degree_bound: 4, ..Default::default() }).unwrap_err();
    assert!(e.to_string().contains("not certified by pipeline"));
}

fn expected_grid() -> BTreeMap<(i64, i64), i64> {
    let mut g = BTreeMap::new();
    for d in 0..=3 {
        for i in 0..=d {
            g.insert((i, d - i), 0);
        }
    }
    for (c, v) in [((0, 0), 1), ((1, 1), 1), ((2, 1), 1), ((0, 3), 1), ((1, 2), -2)] {
        g.insert(c, v);
    }
    g
}

#[test]
fn report_grid_in_paper_mode() {
    for p in [2, 3, 5] {
        let start = Instant::now();
        let r = counterexample_report(ReportConfig { p, ..Default::default() }).unwrap();
        let secs = start.elapsed().as_secs_f64();
        assert_eq!(r.hw_cells(), expected_grid(), "p={p}");
        assert!(r.pass(), "p={p}: {:?}", r.checks);
        let a = r.checks.asymmetry_deg3.as_ref().unwrap();
        assert_eq!((a.h03, a.h30, a.difference), (1, 0, 1));
        assert!(secs < 10.0, "p={p} took {secs:.1}s");
    }
}

#[test]
fn report_object_matches_hand_built_fixture() {
    let p = 3;
    let r = counterexample_report(ReportConfig { p, ..Default::default() }).unwrap();
    let mut x = FormalObject::empty(p, 1);
    for n in 0..=3 {
        x.push(make_block(BlockKind::UnitW, p, 1).unwrap(), -n, -n).unwrap();
        x.push(make_block(BlockKind::DAlphaP, p, 1).unwrap(), -n, -2 - n).unwrap();
        x.push(make_block(BlockKind::Domino { t: 0 }, p, 1).unwrap(), -n, -3 - n).unwrap();
    }
    let mut a = r.table.object.canonical();
    let mut b = x.canonical();
    a.sort();
    b.sort();
    assert_eq!(a, b);
    assert_eq!(r.invariants, hodge_witt_numbers(&x, Trunc::default()).unwrap());
}

#[test]
fn split_mode_changes_structure_not_numbers() {
    let paper = counterexample_report(ReportConfig { p: 2, ..Default::default() }).unwrap();
    let split =
        counterexample_report(ReportConfig { p: 2, policy: ExtensionPolicy::Split, ..Default::default() }).unwrap();
    assert_eq!(paper.hw_cells(), split.hw_cells());
    let (a, b) = (paper.balphap.cells(), split.balphap.cells());
    assert_eq!(a[&(0, 3)], "U_0");
    assert_eq!(b[&(0, 3)], "U_-1");
    assert_eq!(b[&(1, 2)], "k(-1)");
    assert!(!a.contains_key(&(1, 2)));
    let j = split.to_json();
    assert_eq!(j.watermark, Some("counterfactual"));
    assert_eq!(j.provenance, None);
    assert!(split.to_markdown().contains("COUNTERFACTUAL"));
    assert_eq!(paper.to_json().watermark, None);
}

#[test]
fn reports_agree_across_truncations() {
    let a = counterexample_report(ReportConfig { p: 3, m: 6, n: 12, ..Default::default() }).unwrap();
    let b = counterexample_report(ReportConfig { p: 3, m: 8, n: 16, ..Default::default() }).unwrap();
    let strip = |r: &Report| {
        let mut v = serde_json::to_value(r.to_json()).unwrap();
        v.as_object_mut().unwrap().remove("truncation");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn json_shape() {
    let r = counterexample_report(ReportConfig { p: 5, ..Default::default() }).unwrap();
    let v = serde_json::to_value(r.to_json()).unwrap();
    assert_eq!(v["mode"], "paper-nonsplit");
    assert_eq!(v["table"]["1,1"], "W(-1)");
    assert_eq!(v["table"]["0,2"], "D(alpha_p)");
    assert_eq!(v["hW"]["1,2"], -2);
    assert_eq!(v["truncation"]["p"], 5);
    assert_eq!(v["checks"]["asymmetry_deg3"]["difference"], 1);
    assert_eq!(v["ses"][1], "U_0");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Lower degree bounds give the restriction of the full grid.
    #[test]
    fn lower_bounds_restrict(bound in 0u32..=3, p in prop::sample::select(vec![2u64, 3])) {
        let r = counterexample_report(ReportConfig { p, m: 4, n: 8, degree_bound: bound, ..Default::default() }).unwrap();
        let full = expected_grid();
        for (c, v) in r.hw_cells() {
            prop_assert_eq!(full[&c], v);
        }
        prop_assert_eq!(r.hw_cells().len(), ((bound + 1) * (bound + 2) / 2) as usize);
    }
}
