mod common;

use std::sync::Arc;

use ccw_core::covers::*;
use ccw_core::gen::{brick_cover, brick_lebesgue, fiber_cover};
use ccw_core::q::{self, Q};
use common::*;
use proptest::prelude::*;

fn full(ground: &Arc<Ground>) -> CoverFamily {
    CoverFamily::new(ground.clone(), vec![ground.full_set()]).unwrap()
}

fn singletons(ground: &Arc<Ground>) -> CoverFamily {
    let members = (0..ground.size())
        .map(|p| {
            let mut s = ground.empty_set();
            s.insert(p);
            s
        })
        .collect();
    CoverFamily::new(ground.clone(), members).unwrap()
}

fn random_cover(ground: &Arc<Ground>, masks: &[Vec<bool>]) -> CoverFamily {
    let mut members: Vec<Subset> = masks
        .iter()
        .map(|bits| {
            let mut s = ground.empty_set();
            for (p, &b) in bits.iter().enumerate().take(ground.size()) {
                s.set(p, b);
            }
            s
        })
        .filter(|s| !s.is_clear())
        .collect();
    // patch uncovered points into the first member so that the family covers
    let mut missing = ground.full_set();
    for m in &members {
        missing.difference_with(m);
    }
    if members.is_empty() {
        members.push(ground.full_set());
    } else {
        members[0].union_with(&missing);
    }
    CoverFamily::new(ground.clone(), members).unwrap()
}

#[test]
fn dimension_examples() {
    let g = z_trivial(3, 2);
    assert_eq!(family_dimension(&full(&g)), 0);
    let empty = CoverFamily::new(g.clone(), vec![]).unwrap();
    assert_eq!(family_dimension(&empty), -1);
    let mut a = g.empty_set();
    let mut b = g.empty_set();
    a.insert_range(0..3);
    b.insert_range(2..5);
    let two = CoverFamily::new(g.clone(), vec![a, b]).unwrap();
    assert_eq!(family_dimension(&two), 1);
}

#[test]
fn lebesgue_examples() {
    let g = interval(64, GroundAction::Diagonal);
    let f = full(&g);
    for alpha in 1..=65 {
        assert!(lebesgue_check(&f, &q::int(alpha)).unwrap().passed);
    }
    let g = z_trivial(6, 1);
    let s = singletons(&g);
    assert!(lebesgue_check(&s, &q::one()).unwrap().passed);
    let r = lebesgue_check(&s, &q::int(2)).unwrap();
    assert!(!r.passed);
    assert!(r.witness.is_some());
    assert!(matches!(lebesgue_check(&s, &q::int(8)), Err(ccw_core::Error::InsufficientDomain(_))));
}

#[test]
fn brick_lebesgue_numbers_match_the_oracle() {
    for (r, l, layers) in [(20, 8, 2), (20, 6, 3), (24, 12, 2), (18, 5, 1), (30, 9, 3)] {
        let g = z_trivial(r, 1);
        let c = brick_cover(g, l, layers).unwrap();
        let best = (1..=r as i64 + 1).take_while(|&a| lebesgue_oracle(&c, &q::int(a))).last().unwrap();
        assert_eq!(best, brick_lebesgue(l, layers), "L={l} layers={layers}");
        for a in 1..=best + 1 {
            assert_eq!(lebesgue_check(&c, &q::int(a)).unwrap().passed, a <= best);
        }
    }
}

#[test]
fn f_subset_examples() {
    let g = interval(64, GroundAction::Diagonal);
    let vcyc = FamilyPredicate::new(FamilyKind::Vcyc);
    let r = f_subset_check(&full(&g), 0, &vcyc).unwrap();
    assert_eq!(r.verdict, FSubsetVerdict::Ok);
    assert_eq!(r.stabilizer.len(), g.window().len());

    let g = interval(8, GroundAction::Diagonal);
    let zero = g.model.space.index_of("0").unwrap();
    let fibers = fiber_cover(g.clone(), &[zero]).unwrap();
    let trivial = FamilyPredicate::new(FamilyKind::Trivial);
    let r = f_subset_check(&fibers, 0, &trivial).unwrap();
    assert_eq!(r.verdict, FSubsetVerdict::Ok);
    assert_eq!(r.stabilizer, vec![g.window().identity()]);

    let g = z_trivial(8, 1);
    let w = g.window();
    let u = g.product([z_index(w, 0), z_index(w, 1)], &[0]);
    let c = CoverFamily::new(g.clone(), vec![u]).unwrap();
    match f_subset_check(&c, 0, &vcyc).unwrap().verdict {
        FSubsetVerdict::OrbitOverlap { g: h } => assert_eq!(z_value(w, h).abs(), 1),
        v => panic!("expected an overlap, got {v:?}"),
    }
}

#[test]
fn multiplicity_examples() {
    let g = z_trivial(10, 2);
    let s = singletons(&g);
    let m = g_multiplicity(&s, &q::one()).unwrap();
    assert_eq!(m.value as isize, family_dimension(&s) + 1);
    for d in 1..=11 {
        assert_eq!(g_multiplicity(&full(&g), &q::int(d)).unwrap().value, 1);
    }
}

#[test]
fn brick_multiplicity_at_quarter_length() {
    let g = z_trivial(64, 1);
    let c = brick_cover(g.clone(), 8, 2).unwrap();
    let d = q::int(2);
    let w = g.window();
    let mut best = 0;
    for h in 0..w.len() {
        if w.word_length(h) as i64 + 2 > 65 {
            continue;
        }
        let hits = c
            .members()
            .iter()
            .filter(|m| (0..w.len()).any(|k| w.dist(h, k) < 2 && m.contains(g.idx(k, 0))))
            .count();
        best = best.max(hits);
    }
    let m = g_multiplicity(&c, &d).unwrap();
    assert_eq!(m.value, best);
    assert!(m.value == 2 || m.value == 3);
}

#[test]
fn pad_and_shrink_examples() {
    let g = z_trivial(6, 2);
    let a = q::int(3);
    assert!(pad(&g, &g.empty_set(), &a).unwrap().set.is_clear());
    let s = shrink(&g, &g.full_set(), &a).unwrap().set;
    let inner = g.product(g.window().inner_window(&a), &[0, 1]);
    assert!(inner.is_subset(&s));
}

#[test]
fn r_disjointness_examples() {
    let g = z_trivial(12, 1);
    let w = g.window();
    let u = g.product([z_index(w, 0)], &[0]);
    let v = g.product([z_index(w, 5)], &[0]);
    let c = CoverFamily::new(g.clone(), vec![u.clone(), v]).unwrap();
    assert_eq!(r_disjointness_check(&c, &q::int(4)).unwrap(), None);
    assert_eq!(r_disjointness_check(&c, &q::int(5)).unwrap(), None);
    assert!(r_disjointness_check(&c, &q::int(6)).unwrap().is_some());
    let overlapping = CoverFamily::new(g.clone(), vec![u.clone(), u]).unwrap();
    assert!(r_disjointness_check(&overlapping, &q::frac(1, 2)).unwrap().is_some());
}

#[test]
fn boundary_split_examples() {
    let g = interval(4, GroundAction::Diagonal);
    let s = split_boundary_parts(&full(&g));
    assert!(s.interior.is_empty());
    assert_eq!(s.boundary, vec![0]);

    let interior = g.model.interior_points();
    let c = fiber_cover(g.clone(), &interior).unwrap();
    assert!(split_boundary_parts(&c).boundary.is_empty());

    let bd = g.model.boundary_points();
    let mixed = fiber_cover(g.clone(), &[interior[0], bd[0], interior[1], bd[1]]).unwrap();
    let s = split_boundary_parts(&mixed);
    assert_eq!((s.interior.len(), s.boundary.len()), (2, 2));
    assert_eq!(s.boundary, vec![1, 3]);
    assert!(s.bound_holds());
}

#[test]
fn multiplicity_is_constant_along_orbits_of_ground_points() {
    let g = z_trivial(20, 2);
    let c = brick_cover(g.clone(), 6, 3).unwrap();
    let count = |p: usize| c.members().iter().filter(|m| m.contains(p)).count();
    let w = g.window();
    for h in w.generator_indices() {
        for p in 0..g.size() {
            if let Some(hp) = g.act(h, p) {
                assert_eq!(count(p), count(hp));
            }
        }
    }
}

fn cover_case() -> impl Strategy<Value = (u32, usize, Vec<Vec<bool>>)> {
    (1u32..5, 1usize..3).prop_flat_map(|(r, m)| {
        let size = (2 * r as usize + 1) * m;
        (Just(r), Just(m), proptest::collection::vec(proptest::collection::vec(any::<bool>(), size), 1..5))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dimension_matches_the_oracle((r, m, masks) in cover_case()) {
        let g = z_trivial(r, m);
        let c = random_cover(&g, &masks);
        prop_assert_eq!(family_dimension(&c), dimension_oracle(&c));
    }

    #[test]
    fn lebesgue_check_matches_the_oracle_and_is_monotone((r, m, masks) in cover_case(), num in 1i64..12, den in 1i64..3) {
        let g = z_trivial(r, m);
        let c = random_cover(&g, &masks);
        let alpha = q::frac(num, den);
        if alpha > q::int(r as i64 + 1) {
            return Ok(());
        }
        let passed = lebesgue_check(&c, &alpha).unwrap().passed;
        prop_assert_eq!(passed, lebesgue_oracle(&c, &alpha));
        if passed {
            for smaller in 1..=num {
                prop_assert!(lebesgue_check(&c, &q::frac(smaller, den)).unwrap().passed);
            }
        }
    }

    #[test]
    fn pad_shrink_duality_and_oracles((r, m, masks) in cover_case(), num in 1i64..12, den in 1i64..3) {
        let g = z_trivial(r, m);
        let alpha = q::frac(num, den);
        if alpha > q::int(r as i64 + 1) {
            return Ok(());
        }
        let c = random_cover(&g, &masks);
        let u = c.member(0);
        let padded = pad(&g, u, &alpha).unwrap().set;
        let shrunk = shrink(&g, u, &alpha).unwrap().set;
        prop_assert_eq!(&padded, &pad_oracle(&g, u, &alpha));
        prop_assert_eq!(&shrunk, &shrink_oracle(&g, u, &alpha));
        // B(U, −α) = −B(−U, α) on the inner window
        let mut comp = u.clone();
        comp.toggle_range(..);
        let mut dual = pad(&g, &comp, &alpha).unwrap().set;
        dual.toggle_range(..);
        dual.intersect_with(&g.product(g.window().inner_window(&alpha), &(0..m).collect::<Vec<_>>()));
        prop_assert_eq!(&shrunk, &dual);
        prop_assert!(pad(&g, &shrunk, &alpha).unwrap().set.is_subset(u));
    }

    #[test]
    fn multiplicity_dominates_dimension((r, m, masks) in cover_case(), d in 1i64..6) {
        let g = z_trivial(r, m);
        let c = random_cover(&g, &masks);
        let d = q::int(d);
        if d > q::int(r as i64 + 1) {
            return Ok(());
        }
        prop_assert!(g_multiplicity(&c, &d).unwrap().value as isize >= family_dimension(&c) + 1);
    }

    #[test]
    fn r_disjointness_matches_the_oracle((r, m, masks) in cover_case(), rad in 1i64..6) {
        let g = z_trivial(r, m);
        let c = random_cover(&g, &masks);
        let rad = Q::from_integer(rad as i128);
        let oracle = (0..c.len()).any(|i| {
            let p = pad_oracle(&g, c.member(i), &rad);
            (0..c.len()).any(|j| i != j && !p.is_disjoint(c.member(j)))
        });
        prop_assert_eq!(r_disjointness_check(&c, &rad).unwrap().is_some(), oracle);
    }
}
