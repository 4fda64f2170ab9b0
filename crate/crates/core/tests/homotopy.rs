mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use ccw_core::covers::{CoverFamily, Ground, GroundAction, Subset};
use ccw_core::gen::{brick_cover, lattice_grid_model, perturbed_interval_homotopy, regular_model};
use ccw_core::group::GroupSpec;
use ccw_core::homotopy::*;
use ccw_core::q::{self, Q};
use ccw_core::space::{interval_compactification, tree_boundary_model, CompactificationModel};
use ccw_core::Error;
use common::*;
use num_traits::Zero;
use proptest::prelude::*;

fn genuine(model: CompactificationModel) -> (HomotopyActionModel, Arc<Ground>) {
    let model = Arc::new(model);
    let s = standard_s(&model.window);
    let ha = genuine_to_homotopy(model.clone(), &s, &[]).unwrap();
    let ground = Arc::new(Ground::new(model, GroundAction::Translation, usize::MAX).unwrap());
    (ha, ground)
}

fn interval_ha(r: u32) -> (HomotopyActionModel, Arc<Ground>) {
    genuine(interval_compactification(window(GroupSpec::integers(), r)).unwrap())
}

/// One ADB step read off the definition: `(gs, y)` with `y = f(x)` for
/// `f ∈ F_{s⁻¹}` or `f(y) = x` for `f ∈ F_s`.
fn adb_oracle(ha: &HomotopyActionModel, ground: &Ground, a: &Subset, n: usize) -> Subset {
    let w = ground.window();
    let mut set = a.clone();
    for _ in 0..n {
        let mut next = set.clone();
        for p in set.ones() {
            let (g, x) = ground.split(p);
            for &s in ha.s() {
                let Some(gs) = w.mul(g, s) else { continue };
                for f in ha.f_set(w.inverse(s)) {
                    if let Some(y) = f[x] {
                        next.insert(ground.idx(gs, y as usize));
                    }
                }
                for f in ha.f_set(s) {
                    for (y, fy) in f.iter().enumerate() {
                        if *fy == Some(x as u32) {
                            next.insert(ground.idx(gs, y));
                        }
                    }
                }
            }
        }
        set = next;
    }
    set
}

fn point(ground: &Ground, g: usize, x: usize) -> Subset {
    let mut s = ground.empty_set();
    s.insert(ground.idx(g, x));
    s
}

#[test]
fn validation_examples() {
    let (ha, _) = interval_ha(6);
    ha.validate().unwrap();

    let mut h: BTreeMap<(usize, usize), Vec<PMap>> = ha.homotopies().clone();
    let key = *h.keys().find(|(g, k)| *g != *k).unwrap();
    let samples = h.get_mut(&key).unwrap();
    let x = samples[0].iter().position(|y| y.is_some()).unwrap();
    samples[0][x] = Some((samples[0][x].unwrap() + 1) % ha.points() as u32);
    let phi: BTreeMap<usize, PMap> = ha.s().iter().map(|&g| (g, ha.phi(g).unwrap().clone())).collect();
    let err = HomotopyActionModel::new(ha.model.clone(), ha.s().to_vec(), phi, h, ha.time_grid().to_vec());
    assert!(matches!(err, Err(Error::HomotopyLaw(_))));

    let model = Arc::new(interval_compactification(window(GroupSpec::integers(), 3)).unwrap());
    let id = model.window.identity();
    let only = genuine_to_homotopy(model, &[], &[]).unwrap();
    assert_eq!(only.s(), &[id]);
    let f1 = only.f_set(id);
    assert_eq!(f1.len(), 1);
    assert!(f1[0].iter().enumerate().all(|(x, y)| *y == Some(x as u32)));
}

#[test]
fn genuine_models_convert() {
    interval_ha(8);
    let tree = tree_boundary_model(2, 3, 3, 1 << 20).unwrap();
    let (ha, _) = genuine(tree.clone());
    assert_eq!(ha.s().len(), 5);
    // the tree action is partial, so demanding totality fails
    let model = Arc::new(tree);
    let all: Vec<usize> = (0..model.len()).collect();
    let err = genuine_to_homotopy(model.clone(), &standard_s(&model.window), &all);
    assert!(matches!(err, Err(Error::InsufficientDomain(_))));
}

#[test]
fn adb_examples_on_the_integers() {
    let (ha, ground) = interval_ha(10);
    let w = ground.window();
    let m = &ground.model;
    let x0 = m.space.index_of("3").unwrap();
    let a = point(&ground, z_index(w, 0), x0);
    assert_eq!(ha.adb(&ground, &a, 0).unwrap().set, a);
    assert!(a.is_subset(&ha.adb(&ground, &a, 1).unwrap().set));
    let two = ha.adb(&ground, &a, 2).unwrap();
    assert!(!two.clipped);
    let want: BTreeSet<(i64, String)> = (-2..=2).map(|h| (h, (3 - h).to_string())).collect();
    let got: BTreeSet<(i64, String)> = two
        .set
        .ones()
        .map(|p| {
            let (g, x) = ground.split(p);
            (z_value(w, g), m.space.name(x).to_string())
        })
        .collect();
    assert_eq!(got, want);
}

#[test]
fn adb_matches_the_definition() {
    let mut cases = vec![interval_ha(6)];
    cases.push(genuine(tree_boundary_model(2, 3, 3, 1 << 20).unwrap()));
    let ha = perturbed_interval_homotopy(6, 3, 2, 11).unwrap();
    let ground = Arc::new(Ground::new(ha.model.clone(), GroundAction::Translation, usize::MAX).unwrap());
    cases.push((ha, ground));
    for (ha, ground) in &cases {
        let w = ground.window();
        for g in (0..w.len()).filter(|&g| w.word_length(g) <= 1) {
            for x in 0..ground.points() {
                let a = point(ground, g, x);
                for n in 0..=3 {
                    assert_eq!(ha.adb(ground, &a, n).unwrap().set, adb_oracle(ha, ground, &a, n));
                }
            }
        }
    }
}

#[test]
fn n_long_examples() {
    let (ha, ground) = interval_ha(12);
    let full = CoverFamily::new(ground.clone(), vec![ground.full_set()]).unwrap();
    for n in 0..=6 {
        assert!(n_long_check(&full, &ha, n).unwrap().passed);
    }
    let singles: Vec<Subset> = (0..ground.size()).map(|p| {
        let mut s = ground.empty_set();
        s.insert(p);
        s
    }).collect();
    let singles = CoverFamily::new(ground.clone(), singles).unwrap();
    let r = n_long_check(&singles, &ha, 1).unwrap();
    assert!(!r.passed && r.witness.is_some());
}

#[test]
fn brick_covers_are_two_long_by_scan() {
    let (ha, ground) = interval_ha(40);
    let c = brick_cover(ground.clone(), 8, 2).unwrap();
    let report = n_long_check(&c, &ha, 2).unwrap();
    assert!(report.passed);
    let w = ground.window();
    for g in (0..w.len()).filter(|&g| w.word_length(g) <= 38) {
        for x in 0..ground.points() {
            let set = adb_oracle(&ha, &ground, &point(&ground, g, x), 2);
            assert!(c.members().iter().any(|m| set.is_subset(m)));
        }
    }
    // L = 4 with two layers only has Lebesgue number 2, too short for n = 2
    let short = brick_cover(ground.clone(), 4, 2).unwrap();
    assert!(!n_long_check(&short, &ha, 2).unwrap().passed);
}

fn bridge_models() -> Vec<CompactificationModel> {
    vec![
        interval_compactification(window(GroupSpec::integers(), 12)).unwrap(),
        lattice_grid_model(window(GroupSpec::free_abelian(2), 9)).unwrap(),
        regular_model(window(GroupSpec::cyclic(6), 3)).unwrap(),
    ]
}

#[test]
fn genuine_bridge_reproduces_balls() {
    for model in bridge_models() {
        let (ha, ground) = genuine(model);
        let w = ground.window();
        let act = &ground.model.action;
        let radius = w.radius() as i64;
        for alpha in 1..=radius.min(4) + 1 {
            let alpha_q = q::int(alpha);
            for g in w.inner_window(&alpha_q) {
                for x in 0..ground.points() {
                    let Some(rho) = act.apply(w.inverse(g), x) else { continue };
                    let got = ha.adb(&ground, &point(&ground, g, rho), alpha as usize - 1).unwrap().set;
                    let mut want = ground.empty_set();
                    for h in w.ball(g, &alpha_q).unwrap().members {
                        if let Some(y) = act.apply(w.inverse(h), x) {
                            want.insert(ground.idx(h, y));
                        }
                    }
                    assert_eq!(got, want);
                }
            }
        }
    }
}

#[test]
fn adb_is_equivariant_under_translation() {
    let (ha, ground) = interval_ha(10);
    let w = ground.window();
    let n = 3;
    for g in (0..w.len()).filter(|&g| w.word_length(g) <= 3) {
        for h in (0..w.len()).filter(|&h| w.word_length(h) <= 3) {
            let hg = w.mul(h, g).unwrap();
            for x in 0..ground.points() {
                let base = ha.adb(&ground, &point(&ground, g, x), n).unwrap();
                let moved = ha.adb(&ground, &point(&ground, hg, x), n).unwrap();
                assert!(!base.clipped && !moved.clipped);
                assert_eq!(ground.translate(h, &base.set), moved.set);
            }
        }
    }
}

#[test]
fn modulus_examples() {
    let (ha, ground) = interval_ha(6);
    let w = ground.window();
    let x = ground.model.space.index_of("0").unwrap();
    let a = point(&ground, w.identity(), x);
    let half = ground.model.space.min_positive_distance().unwrap() / Q::from_integer(2);
    let r = adb_modulus_probe(&ha, &ground, &a, 1, &half).unwrap();
    assert!(r.delta > Q::zero());
    let diam = q::int(12);
    assert_eq!(adb_modulus_probe(&ha, &ground, &a, 1, &q::int(20)).unwrap().delta, diam);
    for eps in [q::frac(1, 7), q::frac(1, 3), q::one(), q::int(3)] {
        assert_eq!(adb_modulus_probe(&ha, &ground, &a, 0, &eps).unwrap().delta, eps);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adb_is_monotone_and_additive(seed in 0u64..1000, bits_a in any::<u64>(), bits_b in any::<u64>(), n in 0usize..3) {
        let ha = perturbed_interval_homotopy(4, 2, 2, seed).unwrap();
        let ground = Arc::new(Ground::new(ha.model.clone(), GroundAction::Translation, usize::MAX).unwrap());
        let a = subset_from_bits(&ground, bits_a);
        let b = subset_from_bits(&ground, bits_b);
        let an = ha.adb(&ground, &a, n).unwrap().set;
        let an1 = ha.adb(&ground, &a, n + 1).unwrap().set;
        prop_assert!(an.is_subset(&an1));
        let mut ab = a.clone();
        ab.union_with(&b);
        let mut both = an.clone();
        both.union_with(&ha.adb(&ground, &b, n).unwrap().set);
        prop_assert_eq!(ha.adb(&ground, &ab, n).unwrap().set, both);
    }

    #[test]
    fn perturbed_models_validate_and_have_positive_moduli(seed in 0u64..1000, eps_den in 1i64..16) {
        let ha = perturbed_interval_homotopy(5, 3, 2, seed).unwrap();
        ha.validate().unwrap();
        let ground = Ground::new(ha.model.clone(), GroundAction::Translation, usize::MAX).unwrap();
        let w = ground.window();
        let a = point(&ground, w.identity(), ground.points() / 2);
        let r = adb_modulus_probe(&ha, &ground, &a, 1, &q::frac(1, eps_den)).unwrap();
        prop_assert!(r.delta > Q::zero());
    }
}
