use std::collections::BTreeMap;

use invariants::checks::{formula_consistent, symmetry_check};
use invariants::local::block_invariants_at;
use invariants::table::Cell;
use invariants::*;
use num_traits::Zero;
use proptest::prelude::*;
use rmod_core::*;

const TR: Trunc = Trunc { m: 3, n: 6 };

fn obj(kind: BlockKind, p: u64, i: i64, j: i64) -> FormalObject {
    FormalObject::of(kind, p, 1, i, j).unwrap()
}

fn cells(pairs: &[((i64, i64), u64)]) -> BTreeMap<Cell, u64> {
    pairs.iter().copied().collect()
}

fn projective_space(p: u64, n: i64) -> FormalObject {
    let mut x = FormalObject::empty(p, 1);
    for i in 0..=n {
        x.push(make_block(BlockKind::UnitW, p, 1).unwrap(), -i, -i).unwrap();
    }
    x
}

fn all_kinds() -> Vec<BlockKind> {
    let mut kinds = vec![BlockKind::UnitW, BlockKind::ResidueK, BlockKind::DAlphaP];
    for t in -2..=2 {
        kinds.push(BlockKind::Domino { t });
    }
    for (i, j) in [(1, 0), (1, 1), (2, 1), (1, 2)] {
        kinds.push(BlockKind::Dieudonne { i, j });
    }
    kinds
}

#[test]
fn hodge_numbers_of_blocks() {
    for p in [2, 3, 5] {
        let h = hodge_numbers(&obj(BlockKind::UnitW, p, 0, 0), TR).unwrap();
        assert_eq!(h, cells(&[((0, 0), 1)]));
        let h = hodge_numbers(&obj(BlockKind::DAlphaP, p, 0, 0), TR).unwrap();
        assert_eq!(h, cells(&[((0, -1), 1), ((0, 0), 1), ((1, -2), 1), ((1, -1), 1)]));
        let h = hodge_numbers(&obj(BlockKind::Domino { t: 0 }, p, 0, 0), TR).unwrap();
        assert_eq!(h, cells(&[((0, 0), 1), ((1, -2), 1), ((1, 0), 1), ((2, -2), 1)]));
        let h = hodge_numbers(&obj(BlockKind::ResidueK, p, 0, 0), TR).unwrap();
        assert_eq!(h, cells(&[((0, -1), 1), ((0, 0), 1)]));
        for (i, j) in [(1u32, 1u32), (2, 1), (1, 2), (3, 2)] {
            let h = hodge_numbers(&obj(BlockKind::Dieudonne { i, j }, p, 0, 0), TR).unwrap();
            assert_eq!(h, cells(&[((0, 0), i as u64), ((1, -1), j as u64)]), "E({i},{j}) p={p}");
        }
    }
}

#[test]
fn r1_tensor_complexes() {
    let w = obj(BlockKind::UnitW, 3, 0, 0);
    let c = r1_tensor(&w, TR).unwrap();
    assert!(c.is_complex());
    assert_eq!(c.cohomology_lengths(), cells(&[((0, 0), 1)]));
    for n in 1..=4 {
        let c = rn_tensor(&w, n, TR).unwrap();
        assert_eq!(c.cohomology()[&(0, 0)], vec![n], "W_{n}");
    }
    let da = obj(BlockKind::DAlphaP, 2, 0, 0);
    let c = r1_tensor(&da, TR).unwrap();
    assert!(c.is_complex());
    // F, V and d vanish, so both differentials are zero
    let part = &c.parts[0];
    for (g, d) in [(1, -2), (1, -1), (0, -1)] {
        if let Some(m) = part.diff(g, d) {
            assert!(m.is_zero());
        }
    }
}

#[test]
fn shifted_sums_shift_hodge_numbers() {
    let p = 3;
    let mut x = obj(BlockKind::UnitW, p, 0, 0);
    x.push(make_block(BlockKind::UnitW, p, 1).unwrap(), -1, -1).unwrap();
    let h = hodge_numbers(&x, TR).unwrap();
    assert_eq!(h[&(1, 1)], h[&(0, 0)]);
    let u = obj(BlockKind::Domino { t: 1 }, p, 0, 0);
    let hu = hodge_numbers(&u, TR).unwrap();
    let hs = hodge_numbers(&u.shift(2, -3), TR).unwrap();
    let moved: BTreeMap<Cell, u64> = hu.iter().map(|(&(i, j), &v)| ((i - 2, j + 3), v)).collect();
    assert_eq!(hs, moved);
}

#[test]
fn domino_and_heart_examples() {
    for p in [2, 3] {
        for t in -2..=2 {
            let b = make_block(BlockKind::Domino { t }, p, 1).unwrap();
            assert_eq!(domino_number(&b, 0, TR).unwrap(), 1);
            assert_eq!(domino_number(&b, 1, TR).unwrap(), 0);
            assert!(coeur(&b, 0, TR).unwrap().is_zero());
        }
        let e = make_block(BlockKind::Dieudonne { i: 1, j: 1 }, p, 1).unwrap();
        assert_eq!(domino_number(&e, 0, TR).unwrap(), 0);
        let c = coeur(&e, 0, TR).unwrap();
        assert_eq!(c.free_rank(), 2);
        // the heart of a torsion-free Dieudonne block is the block itself
        assert!(find_iso(&e, &c.module).is_some());
        let da = make_block(BlockKind::DAlphaP, p, 1).unwrap();
        let c = coeur(&da, 0, TR).unwrap();
        assert_eq!(c.exps, vec![1]);
        assert!(c.module.f_map(0).mat.is_zero() && c.module.v_map(0).mat.is_zero());
    }
}

#[test]
fn newton_slopes_of_hearts() {
    let p = 5;
    let slope = |kind| {
        let b = make_block(kind, p, 1).unwrap();
        block_invariants(&b, TR).unwrap().hearts[&0].slopes.clone()
    };
    assert_eq!(slope(BlockKind::UnitW), vec![(Q::from_integer(0), 1)]);
    assert_eq!(slope(BlockKind::Dieudonne { i: 1, j: 1 }), vec![(Q::new(1, 2), 2)]);
    assert_eq!(slope(BlockKind::Dieudonne { i: 2, j: 1 }), vec![(Q::new(1, 3), 3)]);
    assert_eq!(slope(BlockKind::Dieudonne { i: 3, j: 2 }), vec![(Q::new(2, 5), 5)]);
}

#[test]
fn metadata_matches_computation() {
    for p in [2, 3, 5] {
        for kind in all_kinds() {
            let b = make_block(kind, p, 1).unwrap();
            let inv = block_invariants(&b, TR).unwrap();
            let meta = b.metadata();
            let dom: BTreeMap<i64, u32> = inv.domino.iter().map(|(&g, &v)| (g, v as u32)).collect();
            assert_eq!(dom, meta.dominoes, "{}", b.name());
            let mut slopes = Vec::new();
            for (g, heart) in &inv.hearts {
                let desc = if heart.free_rank > 0 {
                    CoeurDesc::Crystal(heart.free_rank)
                } else {
                    CoeurDesc::Torsion(heart.torsion.iter().sum())
                };
                assert_eq!(meta.coeur.get(g), Some(&desc), "{}", b.name());
                slopes.extend(heart.slopes.iter().copied());
            }
            assert_eq!(inv.hearts.len(), meta.coeur.len(), "{}", b.name());
            assert_eq!(slopes, meta.slopes, "{}", b.name());
        }
    }
}

#[test]
fn invariants_are_stable_one_level_up() {
    for kind in all_kinds() {
        let b = make_block(kind, 3, 1).unwrap();
        let lvl = working_level(&b, TR).unwrap();
        let lo = block_invariants_at(&b, lvl).unwrap();
        let hi = working_level(&b, Trunc { m: lvl.0 + 2, n: lvl.1 + 3 }).unwrap();
        let hi = block_invariants_at(&b, hi).unwrap();
        assert_eq!((lo.hodge, lo.domino, lo.hearts, lo.tot), (hi.hodge, hi.domino, hi.hearts, hi.tot), "{}", b.name());
    }
}

#[test]
fn hodge_witt_of_domino() {
    let t = hodge_witt_numbers(&obj(BlockKind::Domino { t: 0 }, 2, 0, 0), TR).unwrap();
    let hw: BTreeMap<Cell, i64> = [((0, 0), 1), ((1, -1), -2), ((2, -2), 1)].into_iter().collect();
    assert_eq!(t.h_w, hw);
    let crew = crew_all(&t);
    assert_eq!(crew.iter().map(|c| (c.i, c.hodge, c.hodge_witt)).collect::<Vec<_>>(), vec![(0, 1, 1), (1, 2, 2), (2, 1, 1)]);
    let da = hodge_witt_numbers(&obj(BlockKind::DAlphaP, 2, 0, 0), TR).unwrap();
    assert!(da.h_w.is_empty());
    assert_eq!(crew_check(&da, 0).hodge, 0);
}

#[test]
fn slope_numbers_examples() {
    let m = slope_numbers(&obj(BlockKind::UnitW, 2, 0, 0), TR).unwrap();
    assert_eq!(m, [((0, 0), Q::from_integer(1))].into_iter().collect());
    let m = slope_numbers(&obj(BlockKind::UnitW, 2, -1, -1), TR).unwrap();
    assert_eq!(m, [((1, 1), Q::from_integer(1))].into_iter().collect());
    assert!(slope_numbers(&obj(BlockKind::DAlphaP, 2, 0, -2), TR).unwrap().is_empty());
    let m = slope_numbers(&obj(BlockKind::Dieudonne { i: 2, j: 1 }, 3, 0, 0), TR).unwrap();
    assert_eq!(m[&(0, 0)], Q::from_integer(2));
    assert_eq!(m[&(1, -1)], Q::from_integer(1));
}

#[test]
fn totalization_examples() {
    let t = totalize(&projective_space(3, 3), TR).unwrap();
    for n in 0..=6 {
        let rank = t.get(&n).map_or(0, |c| c.rank);
        assert_eq!(rank, u32::from(n % 2 == 0), "b_{n}");
    }
    let t = totalize(&obj(BlockKind::DAlphaP, 3, 0, -2), TR).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!((t[&2].rank, t[&2].torsion.clone()), (0, vec![1]));
    let t = totalize(&obj(BlockKind::UnitW, 3, 0, 0), TR).unwrap();
    assert_eq!(t[&0].rank, 1);
}

#[test]
fn projective_space_table() {
    for n in 0..=5 {
        let x = projective_space(2, n);
        let (t, rep) = run_checks(&x, TR, Some(n)).unwrap();
        let diag: BTreeMap<Cell, i64> = (0..=n).map(|i| ((i, i), 1)).collect();
        assert_eq!(t.h_w, diag);
        assert!(rep.pass());
        assert!(rep.symmetry.unwrap().pass());
        assert!(rep.mazur_ogus.iter().all(|c| c.pass()));
        assert!(rep.ekedahl.strict.is_empty());
    }
    let t = hodge_witt_numbers(&projective_space(3, 4), TR).unwrap();
    assert!(t.to_markdown(4).contains("| 4 | 0 | 0 | 0 | 0 | 1 |") || t.hw_grid(4)[0] == vec![0]);
}

#[test]
fn counterexample_shape() {
    // W, D(alpha_p)[-2], U_0[-3] twisted by the ladder W(-n)[-n], n <= 3
    let p = 3;
    let mut x = FormalObject::empty(p, 1);
    for n in 0..=3 {
        x.push(make_block(BlockKind::UnitW, p, 1).unwrap(), -n, -n).unwrap();
        x.push(make_block(BlockKind::DAlphaP, p, 1).unwrap(), -n, -2 - n).unwrap();
        x.push(make_block(BlockKind::Domino { t: 0 }, p, 1).unwrap(), -n, -3 - n).unwrap();
    }
    let t = hodge_witt_numbers(&x, Trunc::default()).unwrap();
    let mut grid = BTreeMap::new();
    for (&(i, j), &v) in &t.h_w {
        if i >= 0 && j >= 0 && i + j <= 3 {
            grid.insert((i, j), v);
        }
    }
    let expect: BTreeMap<Cell, i64> = [((0, 0), 1), ((1, 1), 1), ((2, 1), 1), ((0, 3), 1), ((1, 2), -2)].into_iter().collect();
    assert_eq!(grid, expect);
    let h = &t.h;
    // D(alpha_p)(-1)[-3] also reaches (2, 1)
    for (c, v) in [((0, 0), 1), ((1, 1), 3), ((1, 0), 1), ((0, 1), 1), ((0, 2), 1), ((0, 3), 1), ((2, 1), 2), ((1, 2), 1)] {
        assert_eq!(h[&c], v, "h{c:?}");
    }
    let ek = ekedahl_check(&t);
    assert!(ek.pass());
    assert!(ek.equal.contains(&(0, 3)));
    assert!(ek.strict.contains(&(1, 2)));
    let sym = symmetry_check(&t, 4, 3);
    assert!(sym.hodge.keys().all(|&(i, j)| i + j == 3));
    assert_eq!(sym.hodge.get(&(0, 3)), Some(&1));
    assert!(crew_all(&t).iter().all(|c| c.pass()));
}

/// Largest convex polygon with integral slopes below `np` with the same end:
/// the pointwise maximum of the lines `k x + b_k` through lattice slopes.
fn max_integral_below(np: &Polygon) -> Vec<Q> {
    let verts = np.vertices();
    let (w, _) = np.end();
    let w = w.to_integer();
    let kmax = np.segments.last().map_or(0, |s| s.0.ceil().to_integer());
    (0..=w)
        .map(|x| {
            let x = Q::from_integer(x);
            (0..=kmax)
                .map(|k| {
                    let k = Q::from_integer(k);
                    let b = verts.iter().map(|&(vx, vy)| vy - k * vx).min().unwrap();
                    k * x + b
                })
                .max()
                .unwrap()
        })
        .collect()
}

#[test]
fn newton_hodge_matches_polygon_oracle() {
    let p = 2;
    let mut x = FormalObject::empty(p, 1);
    for (kind, i, j) in [
        (BlockKind::Dieudonne { i: 1, j: 1 }, 0, -1),
        (BlockKind::Dieudonne { i: 2, j: 1 }, 0, -1),
        (BlockKind::UnitW, -1, 0),
        (BlockKind::Dieudonne { i: 1, j: 2 }, 0, -2),
        (BlockKind::UnitW, -2, -1),
    ] {
        x.push(make_block(kind, p, 1).unwrap(), i, j).unwrap();
    }
    let t = hodge_witt_numbers(&x, TR).unwrap();
    assert!(newton_hodge_all(&t).iter().all(|c| c.pass()));
    for (n, np) in &t.newton {
        let nh = &t.newton_hodge[n];
        assert_eq!(nh.end(), np.end());
        let oracle = max_integral_below(np);
        let xs = 0..=np.end().0.to_integer();
        let ours: Vec<Q> = xs.map(|x| nh.eval(Q::from_integer(x))).collect();
        assert_eq!(ours, oracle, "degree {n}");
    }
}

#[test]
fn domino_additivity_over_realized_extension() {
    for p in [2, 3, 5] {
        let ring = GaloisRing::new(p, 1, 2).unwrap();
        let out = cone_or_extension(&ring, ring.one(), 6).unwrap();
        assert!(matches!(&out, ExtensionOutcome::Cone { iso: Some(_), .. }));
        let total = domino_numbers(&obj(BlockKind::Domino { t: -1 }, p, 0, 0), TR).unwrap();
        let mut parts = domino_numbers(&obj(BlockKind::ResidueK, p, -1, 0), TR).unwrap();
        for (c, v) in domino_numbers(out.object(), TR).unwrap() {
            *parts.entry(c).or_default() += v;
        }
        assert_eq!(total, parts);
        assert_eq!(total.get(&(0, 0)), Some(&1));
    }
}

#[test]
fn json_and_markdown() {
    let t = hodge_witt_numbers(&obj(BlockKind::Dieudonne { i: 1, j: 1 }, 2, 0, 0), TR).unwrap();
    let j = serde_json::to_value(t.to_json()).unwrap();
    assert_eq!(j["hW"]["0,0"], 1);
    assert_eq!(j["m"]["1,-1"], 1);
    assert_eq!(j["newton"]["0"], serde_json::json!([["1/2", 2]]));
    assert_eq!(j["betti"]["0"], 2);
    let md = hodge_witt_numbers(&projective_space(2, 2), TR).unwrap().to_markdown(2);
    let rows: Vec<&str> = md.lines().skip(2).collect();
    assert_eq!(rows, vec!["| 2 | 0 |  |  |", "| 1 | 0 | 1 |  |", "| 0 | 1 | 0 | 0 |"]);
}

fn kind_strategy() -> impl Strategy<Value = BlockKind> {
    prop_oneof![
        Just(BlockKind::UnitW),
        Just(BlockKind::ResidueK),
        Just(BlockKind::DAlphaP),
        (-2i64..=2).prop_map(|t| BlockKind::Domino { t }),
        prop_oneof![Just((1u32, 0u32)), Just((1, 1)), Just((2, 1)), Just((1, 2))]
            .prop_map(|(i, j)| BlockKind::Dieudonne { i, j }),
    ]
}

fn object_strategy() -> impl Strategy<Value = FormalObject> {
    (prop_oneof![Just(2u64), Just(3)], prop::collection::vec((kind_strategy(), -2i64..=2, -3i64..=1), 1..5)).prop_map(
        |(p, parts)| {
            let mut x = FormalObject::empty(p, 1);
            for (k, i, j) in parts {
                x.push(make_block(k, p, 1).unwrap(), i, j).unwrap();
            }
            x
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn invariants_are_additive(x in object_strategy()) {
        let whole = hodge_witt_numbers(&x, TR).unwrap();
        let mut h: BTreeMap<Cell, u64> = BTreeMap::new();
        let mut hw: BTreeMap<Cell, i64> = BTreeMap::new();
        for s in x.summands() {
            let one = FormalObject::single_at(s.block.clone(), s.shift.0, s.shift.1);
            let t = hodge_witt_numbers(&one, TR).unwrap();
            for (c, v) in t.h { *h.entry(c).or_default() += v; }
            for (c, v) in t.h_w { *hw.entry(c).or_default() += v; }
        }
        hw.retain(|_, v| *v != 0);
        prop_assert_eq!(whole.h, h);
        prop_assert_eq!(whole.h_w, hw);
    }

    #[test]
    fn crew_and_formula_hold(x in object_strategy()) {
        let t = hodge_witt_numbers(&x, TR).unwrap();
        prop_assert!(formula_consistent(&t));
        for c in crew_all(&t) {
            prop_assert!(c.pass(), "{:?}", c);
        }
        prop_assert!(ekedahl_check(&t).pass());
        prop_assert!(t.m.values().all(|v| !v.is_zero()));
    }
}

#[test]
fn symmetry_deltas_serialize_with_string_keys() {
    let t = hodge_witt_numbers(&projective_space(2, 4), TR).unwrap();
    let s = symmetry_check(&t, 5, 10);
    assert!(!s.pass());
    let v = serde_json::to_value(&s).unwrap();
    assert_eq!(v["serre"]["0,0"], 1);
    assert_eq!(v["dim"], 5);
}
