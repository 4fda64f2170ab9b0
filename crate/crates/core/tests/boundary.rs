mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use ccw_core::boundary::*;
use ccw_core::covers::*;
use ccw_core::gen::{cylinder_cover, fiber_blocks_cover, fiber_cover, regular_model};
use ccw_core::group::GroupSpec;
use ccw_core::q::{self, Q};
use ccw_core::space::{tree_boundary_model, CompactificationModel, FiniteMetricSpace, PartialAction, SimplicialComplex, VertexAction};
use ccw_core::Error;
use common::*;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn tree(depth: usize, radius: u32, action: GroundAction) -> Arc<Ground> {
    ground_of(tree_boundary_model(2, depth, radius, 1 << 20).unwrap(), action)
}

/// Largest value among realized distances and 1, at most 1, whose open ball
/// around `x` meets the boundary only inside every slice containing `x`.
fn epsilon_oracle(cover: &CoverFamily, x: usize) -> Q {
    let m = &cover.ground.model;
    let sp = &m.space;
    let slices = boundary_slices(cover);
    let mut cands: BTreeSet<Q> = (0..sp.len())
        .flat_map(|a| (0..sp.len()).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| sp.dist(a, b))
        .filter(|d| *d <= q::one())
        .collect();
    cands.insert(q::one());
    cands
        .into_iter()
        .rev()
        .find(|c| {
            (0..sp.len())
                .filter(|&y| m.boundary[y] && sp.dist(x, y) < *c)
                .all(|y| slices.iter().filter(|s| s.contains(&x)).all(|s| s.contains(&y)))
        })
        .unwrap()
}

#[test]
fn interior_cover_of_a_vertex_and_an_edge() {
    let w = window(GroupSpec::cyclic(2), 1);
    let fin = FamilyPredicate::new(FamilyKind::Finite);
    let vertex = SimplicialComplex::from_maximal(names(1), &[vec![0]])
        .unwrap()
        .with_action(VertexAction::from_fn(2, 1, |_, v| Some(v)))
        .unwrap();
    let c = simplicial_interior_cover(&vertex, w.clone(), &fin).unwrap();
    assert_eq!(c.cover.len(), 1);
    assert_eq!(family_dimension(&c.cover), 0);

    let edge = SimplicialComplex::from_maximal(names(2), &[vec![0, 1]])
        .unwrap()
        .with_action(VertexAction::from_fn(2, 2, |_, v| Some(v)))
        .unwrap();
    let c = simplicial_interior_cover(&edge, w, &fin).unwrap();
    let nb = |s: &[usize]| -> BTreeSet<usize> { c.neighbourhoods[edge.simplices().iter().position(|t| t == s).unwrap()].iter().copied().collect() };
    let (a, b, ab) = (nb(&[0]), nb(&[1]), nb(&[0, 1]));
    assert!(a.is_disjoint(&b));
    assert!(!ab.is_disjoint(&a) && !ab.is_disjoint(&b));
    assert_eq!(family_dimension(&c.cover), 1);
}

#[test]
fn interior_cover_of_a_symmetric_triangle() {
    let w = window(GroupSpec::cyclic(3), 2);
    let act = |g: usize, v: usize| w.mul(g, v);
    let edges = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
    let k = SimplicialComplex::from_maximal(names(3), &edges)
        .unwrap()
        .with_action(VertexAction::from_fn(3, 3, act))
        .unwrap();
    let fin = FamilyPredicate::new(FamilyKind::Finite);
    let c = simplicial_interior_cover(&k, w.clone(), &fin).unwrap();
    assert_eq!(c.cover.len(), 6);
    let orbits = equivariance_check(&c.cover);
    assert!(orbits.unmatched.is_empty());
    assert_eq!(orbits.orbits.len(), 2);
    assert!(orbits.orbits.iter().all(|o| o.len() == 3));
    assert!(family_dimension(&c.cover) <= k.dimension());
    // neighbourhoods of equal-dimensional simplices are disjoint
    for (i, s) in k.simplices().iter().enumerate() {
        for (j, t) in k.simplices().iter().enumerate() {
            if i < j && s.len() == t.len() {
                let a: BTreeSet<_> = c.neighbourhoods[i].iter().collect();
                assert!(c.neighbourhoods[j].iter().all(|y| !a.contains(y)));
            }
        }
    }
    let full = SimplicialComplex::from_maximal(names(3), &[vec![0, 1, 2]])
        .unwrap()
        .with_action(VertexAction::from_fn(3, 3, act))
        .unwrap();
    let trivial = FamilyPredicate::new(FamilyKind::Trivial);
    assert!(matches!(simplicial_interior_cover(&full, w, &trivial), Err(Error::FamilyViolation(_))));
}

#[test]
fn proper_cover_of_a_free_action() {
    let model = Arc::new(regular_model(window(GroupSpec::cyclic(6), 3)).unwrap());
    let p = proper_interior_cover(model.clone(), &FamilyPredicate::new(FamilyKind::Trivial)).unwrap();
    assert_eq!(p.representatives.len(), 1);
    assert!(p.sets.iter().all(|s| s.len() == 1));
    assert!(p.stabilizers.iter().all(|s| s == &vec![model.window.identity()]));
    assert_eq!(p.cover.len(), 6);
    assert_eq!(family_dimension(&p.cover), 0);
    assert!(p.return_sets.iter().all(|&r| r <= model.window.len()));
}

#[test]
fn proper_cover_of_a_reflection() {
    let w = window(GroupSpec::cyclic(2), 1);
    let pts: Vec<i64> = vec![-4, -3, -2, -1, 0, 1, 2, 3, 4];
    let sp = FiniteMetricSpace::new(pts.iter().map(|x| x.to_string()).collect(), |a, b| q::int((pts[a] - pts[b]).abs())).unwrap();
    let flip = 1 - w.identity();
    let action = PartialAction::from_fn(2, pts.len(), |g, x| Some(if g == flip { pts.len() - 1 - x } else { x }));
    let model = Arc::new(CompactificationModel::new(w.clone(), sp, vec![false; pts.len()], action).unwrap());
    let fin = FamilyPredicate::new(FamilyKind::Finite);
    let p = proper_interior_cover(model.clone(), &fin).unwrap();
    let zero = model.space.index_of("0").unwrap();
    let i = p.representatives.iter().position(|&x| x == zero).unwrap();
    assert_eq!(p.stabilizers[i].len(), 2);
    let ux: BTreeSet<usize> = p.sets[i].iter().copied().collect();
    let flipped: BTreeSet<usize> = ux.iter().map(|&y| model.action.apply(flip, y).unwrap()).collect();
    assert_eq!(ux, flipped);
    assert!(ux.contains(&zero));
    for (x, s) in p.representatives.iter().zip(&p.sets) {
        assert!(s.contains(x));
    }
    let union: BTreeSet<usize> = p.cover.members().iter().flat_map(|m| m.ones()).collect();
    assert_eq!(union.len(), p.cover.ground.size());
    let trivial = FamilyPredicate::new(FamilyKind::Trivial);
    assert!(matches!(proper_interior_cover(model, &trivial), Err(Error::FamilyViolation(_))));
}

#[test]
fn epsilon_examples() {
    let g = tree(3, 2, GroundAction::Translation);
    let bd = g.model.boundary_points();
    let whole = fiber_blocks_cover(g.clone(), &[bd.clone()]).unwrap();
    let eps = boundary_epsilon(&whole).unwrap();
    assert!(bd.iter().all(|&x| eps.eps[x] == Some(q::one())));

    let split = cylinder_cover(g.clone(), 2).unwrap();
    let eps = boundary_epsilon(&split).unwrap();
    assert!(bd.iter().all(|&x| eps.eps[x] == Some(q::frac(1, 2))));

    let lone = bd[0];
    let rest: Vec<usize> = bd[1..].to_vec();
    let isolated = fiber_blocks_cover(g.clone(), &[vec![lone], rest]).unwrap();
    let eps = boundary_epsilon(&isolated).unwrap();
    assert_eq!(eps.eps[lone], Some(q::frac(1, 4)));
    for c in [&whole, &split, &isolated] {
        let eps = boundary_epsilon(c).unwrap();
        for &x in &bd {
            assert_eq!(eps.eps[x], Some(epsilon_oracle(c, x)));
        }
    }
    let missing = fiber_blocks_cover(g.clone(), &[bd[1..].to_vec()]).unwrap();
    assert!(matches!(boundary_epsilon(&missing), Err(Error::UncoveredBoundary(_))));
}

fn boundary_covers(g: &Arc<Ground>) -> Vec<CoverFamily> {
    let bd = g.model.boundary_points();
    let name = |x: usize| g.model.space.name(x).to_string();
    let starts = |p: &'static str| -> Vec<usize> { bd.iter().copied().filter(|&x| name(x).starts_with(p)).collect() };
    let overlapping = {
        let mut a = starts("a");
        a.extend(starts("bb"));
        let mut b = starts("b");
        b.extend(starts("ab"));
        vec![a, b, starts("A"), starts("B"), starts("Ab")]
    };
    vec![
        fiber_blocks_cover(g.clone(), &[bd.clone()]).unwrap(),
        cylinder_cover(g.clone(), 1).unwrap(),
        cylinder_cover(g.clone(), 2).unwrap(),
        fiber_blocks_cover(g.clone(), &overlapping).unwrap(),
    ]
}

#[test]
fn extension_laws_on_tree_boundaries() {
    // the tree action is undefined on deep boundary words, so the diagonal
    // picture is exercised on the interval instead
    let tr = tree(3, 2, GroundAction::Translation);
    let iv = interval(6, GroundAction::Diagonal);
    let ends = iv.model.boundary_points();
    let mut covers = boundary_covers(&tr);
    covers.push(fiber_cover(iv.clone(), &ends).unwrap());
    covers.push(fiber_blocks_cover(iv.clone(), &[ends.clone()]).unwrap());
    {
        for v in covers {
            let action = v.ground.action;
            let eps = boundary_epsilon(&v).unwrap();
            let ext = extend_boundary_cover(&v, &eps).unwrap();
            assert_eq!(restriction_defect(&v, &ext.cover), None);
            assert_eq!(family_dimension(&ext.cover), family_dimension(&v));
            assert_eq!(intersection_law(&v, &eps, 3), None);
            let eq = extension_equivariance(&v, &eps).unwrap();
            assert_eq!(eq.mismatches, 0, "{action}");
            assert!(eq.checked > 0);
        }
    }
}

#[test]
fn intersections_of_extensions_vanish_with_the_slices() {
    let g = tree(3, 1, GroundAction::Translation);
    let v = &boundary_covers(&g)[3];
    let eps = boundary_epsilon(v).unwrap();
    let slices = boundary_slices(v);
    let ext: Vec<BTreeSet<usize>> = slices.iter().map(|s| extend_points(&g.model, &eps, s).into_iter().collect()).collect();
    for i in 0..slices.len() {
        for j in i + 1..slices.len() {
            let meet: Vec<usize> = slices[i].iter().copied().filter(|x| slices[j].contains(x)).collect();
            let both: BTreeSet<usize> = ext[i].intersection(&ext[j]).copied().collect();
            assert_eq!(both.is_empty(), meet.is_empty());
            let direct: BTreeSet<usize> = extend_points(&g.model, &eps, &meet).into_iter().collect();
            assert_eq!(both, direct);
        }
    }
}

#[test]
fn extension_of_the_whole_boundary() {
    let g = tree(3, 2, GroundAction::Translation);
    let bd = g.model.boundary_points();
    let v = fiber_blocks_cover(g.clone(), &[bd.clone()]).unwrap();
    let eps = boundary_epsilon(&v).unwrap();
    let ext = extend_boundary_cover(&v, &eps).unwrap();
    let sp = &g.model.space;
    let padded: Vec<usize> = (0..sp.len()).filter(|&y| bd.iter().any(|&x| sp.dist(x, y) < q::frac(1, 2))).collect();
    assert_eq!(ext.cover.member(0), &g.product(0..g.window().len(), &padded));
    assert_eq!(family_dimension(&ext.cover), 0);
}

#[test]
fn assembling_the_interval() {
    let g = interval(12, GroundAction::Diagonal);
    let m = &g.model;
    let bd = m.boundary_points();
    let v = fiber_cover(g.clone(), &bd).unwrap();
    let eps = boundary_epsilon(&v).unwrap();
    let ext = extend_boundary_cover(&v, &eps).unwrap();
    assert_eq!(restriction_defect(&v, &ext.cover), None);
    let inner = fiber_cover(g.clone(), &m.interior_points()).unwrap();
    let alphas: Vec<Q> = (1..=13).map(q::int).collect();
    let a = assemble_full_cover(&ext.cover, &inner, &alphas).unwrap();
    assert_eq!((a.dim_boundary, a.dim_interior, a.bound), (0, 0, 1));
    assert!(a.dim <= a.bound);
    assert!(a.lebesgue.iter().all(|l| l.passed));

    let full = CoverFamily::new(g.clone(), vec![g.full_set()]).unwrap();
    let none = CoverFamily::new(g.clone(), vec![]).unwrap();
    let alone = assemble_full_cover(&full, &none, &[q::int(2)]).unwrap();
    assert_eq!((alone.dim, alone.bound), (0, 0));
    assert!(matches!(assemble_full_cover(&ext.cover, &none, &[q::int(2)]), Err(Error::CoverageGap(_))));
}

#[test]
fn assembling_a_tree_cover() {
    let g = tree(3, 3, GroundAction::Translation);
    let v = cylinder_cover(g.clone(), 2).unwrap();
    let eps = boundary_epsilon(&v).unwrap();
    let ext = extend_boundary_cover(&v, &eps).unwrap();
    assert_eq!(family_dimension(&ext.cover), 0);
    let inner = fiber_cover(g.clone(), &g.model.interior_points()).unwrap();
    let a = assemble_full_cover(&ext.cover, &inner, &[q::int(2), q::int(3)]).unwrap();
    assert!(a.dim <= a.bound);
    assert_eq!(a.bound, 1);
    assert!(a.lebesgue.iter().all(|l| l.passed));
}
