//! Covers of the interior, the boundary extension and the assembly of a
//! cover of the whole compactification.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::covers::{family_dimension, lebesgue_check, CoverFamily, FamilyPredicate, Ground, GroundAction, LebesgueReport, Subset};
use crate::error::{Error, Result};
use crate::group::GroupWindow;
use crate::q::{self, Q};
use crate::space::{CompactificationModel, FiniteMetricSpace, L1Point, PartialAction, SimplicialComplex};

#[derive(Clone, Debug)]
pub struct InteriorCover {
    /// Points are the simplices of `SK`, sampled at their barycenters.
    pub model: Arc<CompactificationModel>,
    pub cover: CoverFamily,
    /// `N(Δ⁰)` per simplex `Δ` of `K`, in the order of `K.simplices()`.
    pub neighbourhoods: Vec<Vec<usize>>,
}

/// `N(Δ⁰)` is the open star in `SK` of the barycenter of `Δ`. Points of the
/// model are the barycenters of the simplices of `SK` with the `ℓ1` metric
/// of `K`; the cover is `{G × N(Δ⁰)}` on the diagonal ground set.
pub fn simplicial_interior_cover(k: &SimplicialComplex, window: Arc<GroupWindow>, family: &FamilyPredicate) -> Result<InteriorCover> {
    let action = k
        .action()
        .ok_or_else(|| Error::ComplexAction("K carries no group action".into()))?;
    if action.group_size() != window.len() {
        return Err(Error::ComplexAction("action on K does not match the window".into()));
    }
    for s in k.simplices() {
        let stab: Vec<_> = k.stabilizer(s).into_iter().map(|g| window.elem(g).clone()).collect();
        if !family.contains(window.group(), &stab) {
            return Err(Error::FamilyViolation(format!("stabilizer of {}", k.simplex_name(s))));
        }
    }
    let sk = k.barycentric_subdivision()?;
    let chains: Vec<Vec<usize>> = sk.simplices().to_vec();
    let bary: Vec<L1Point> = chains
        .iter()
        .map(|c| {
            let mut pairs = Vec::new();
            for &face in c {
                let carrier = sk.carrier(face).expect("subdivision");
                for &v in carrier {
                    pairs.push((v, q::frac(1, (carrier.len() * c.len()) as i64)));
                }
            }
            L1Point::from_pairs(pairs)
        })
        .collect::<Result<_>>()?;
    let names = chains.iter().map(|c| sk.simplex_name(c)).collect();
    let space = FiniteMetricSpace::new(names, |x, y| bary[x].dist(&bary[y]))?;
    let sk_action = sk.action().expect("induced action");
    let pa = PartialAction::from_fn(window.len(), chains.len(), |g, x| {
        sk_action.apply_set(g, &chains[x]).and_then(|img| sk.simplex_index(&img))
    });
    let n = chains.len();
    let model = Arc::new(CompactificationModel::new(window.clone(), space, vec![false; n], pa)?);
    let ground = Arc::new(Ground::new(model.clone(), GroundAction::Diagonal, usize::MAX)?);
    let mut neighbourhoods = Vec::new();
    for s in k.simplices() {
        let v = k.simplex_index(s).expect("simplex of K");
        neighbourhoods.push((0..n).filter(|&x| chains[x].contains(&v)).collect::<Vec<_>>());
    }
    let members = neighbourhoods.iter().map(|nb| ground.product(0..window.len(), nb)).collect();
    Ok(InteriorCover {
        model,
        cover: CoverFamily::new(ground, members)?,
        neighbourhoods,
    })
}

#[derive(Clone, Debug)]
pub struct ProperCover {
    pub cover: CoverFamily,
    /// Orbit representatives among the interior points.
    pub representatives: Vec<usize>,
    /// `U_x` for each representative.
    pub sets: Vec<Vec<usize>>,
    /// Window stabilizer of each representative.
    pub stabilizers: Vec<Vec<usize>>,
    /// `|RS_x| = #{g : gU⁰_x ∩ U⁰_x ≠ ∅}` per representative.
    pub return_sets: Vec<usize>,
}

/// `U¹_x` is the open ball of half the distance from `x` to its nearest
/// translate, `U²_x = U¹_x ∖ ⋃_{gx≠x} gU¹_x` and `U_x = ⋂_{gx=x} gU²_x`.
pub fn proper_interior_cover(model: Arc<CompactificationModel>, family: &FamilyPredicate) -> Result<ProperCover> {
    let w = model.window.clone();
    let sp = &model.space;
    let interior = model.interior_points();
    let image = |g: usize, set: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> = set.iter().filter_map(|&y| model.action.apply(g, y)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut covered = vec![false; model.len()];
    let mut representatives = Vec::new();
    let mut sets = Vec::new();
    let mut stabilizers = Vec::new();
    let mut return_sets = Vec::new();
    for &x in &interior {
        if covered[x] {
            continue;
        }
        let moved: Vec<usize> = (0..w.len())
            .filter(|&g| model.action.apply(g, x).is_some_and(|y| y != x))
            .collect();
        let stab: Vec<usize> = (0..w.len()).filter(|&g| model.action.apply(g, x) == Some(x)).collect();
        let radius = moved
            .iter()
            .map(|&g| sp.dist(x, model.action.apply(g, x).unwrap()))
            .min()
            .map_or_else(q::one, |d| d / q::int(2));
        let u1: Vec<usize> = sp.open_ball(x, &radius).into_iter().filter(|&y| !model.boundary[y]).collect();
        let mut removed = BTreeSet::new();
        for &g in &moved {
            removed.extend(image(g, &u1));
        }
        let u2: Vec<usize> = u1.iter().copied().filter(|y| !removed.contains(y)).collect();
        let mut ux: BTreeSet<usize> = u2.iter().copied().collect();
        for &g in &stab {
            let img: BTreeSet<usize> = image(g, &u2).into_iter().collect();
            ux = ux.intersection(&img).copied().collect();
        }
        if !ux.contains(&x) {
            ux = BTreeSet::from([x]);
        }
        let ux: Vec<usize> = ux.into_iter().collect();
        let rs = (0..w.len()).filter(|&g| image(g, &u1).iter().any(|y| u1.contains(y))).count();
        let elems: Vec<_> = stab.iter().map(|&g| w.elem(g).clone()).collect();
        if !family.contains(w.group(), &elems) {
            return Err(Error::FamilyViolation(format!("stabilizer of {}", sp.name(x))));
        }
        for g in 0..w.len() {
            if let Some(y) = model.action.apply(g, x) {
                covered[y] = true;
            }
        }
        representatives.push(x);
        sets.push(ux);
        stabilizers.push(stab);
        return_sets.push(rs);
    }
    let ground = Arc::new(Ground::new(model.clone(), GroundAction::Diagonal, usize::MAX)?);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut members = Vec::new();
    for ux in &sets {
        for g in 0..w.len() {
            let img: Option<Vec<usize>> = ux.iter().map(|&y| model.action.apply(g, y)).collect();
            let Some(mut img) = img else { continue };
            img.sort_unstable();
            if seen.insert(img.clone()) {
                members.push(ground.product(0..w.len(), &img));
            }
        }
    }
    Ok(ProperCover {
        cover: CoverFamily::new(ground, members)?,
        representatives,
        sets,
        stabilizers,
        return_sets,
    })
}

/// `ε(x)` for boundary points, `None` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonAssignment {
    pub eps: Vec<Option<Q>>,
}

/// Boundary slices `V₁ = {x ∈ ∂X : (1, x) ∈ V}` of the members.
pub fn boundary_slices(cover: &CoverFamily) -> Vec<Vec<usize>> {
    let ground = &cover.ground;
    let id = ground.window().identity();
    let bd = ground.model.boundary_points();
    cover
        .members()
        .iter()
        .map(|v| bd.iter().copied().filter(|&x| v.contains(ground.idx(id, x))).collect())
        .collect()
}

/// `ε(x)`: the largest value among realized distances and `1`, at most 1,
/// with `B(x, ε(x)) ∩ ∂X` inside every slice containing `x`.
pub fn boundary_epsilon(cover: &CoverFamily) -> Result<EpsilonAssignment> {
    let model = &cover.ground.model;
    let sp = &model.space;
    let slices = boundary_slices(cover);
    let mut cands: Vec<Q> = sp.realized_distances().into_iter().filter(|d| *d <= q::one()).collect();
    cands.push(q::one());
    cands.sort();
    cands.dedup();
    let mut eps = vec![None; model.len()];
    for x in model.boundary_points() {
        let containing: Vec<&Vec<usize>> = slices.iter().filter(|s| s.contains(&x)).collect();
        if containing.is_empty() {
            return Err(Error::UncoveredBoundary(sp.name(x).to_string()));
        }
        let ok = |c: &Q| {
            sp.open_ball(x, c)
                .into_iter()
                .filter(|&y| model.boundary[y])
                .all(|y| containing.iter().all(|s| s.contains(&y)))
        };
        eps[x] = cands.iter().rev().find(|c| ok(c)).copied();
    }
    Ok(EpsilonAssignment { eps })
}

/// `U(Y) = ⋃_{x∈Y} B(x, ε(x)/2)` for boundary points `Y`.
pub fn extend_points(model: &CompactificationModel, eps: &EpsilonAssignment, y: &[usize]) -> Vec<usize> {
    let mut out = BTreeSet::new();
    for &x in y {
        if let Some(e) = eps.eps[x] {
            out.extend(model.space.open_ball(x, &(e / q::int(2))));
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct ExtendedSet {
    pub set: Subset,
    /// Interior points dropped because the action was undefined on them.
    pub shortfall: usize,
}

/// `U(V)`. On the translation ground set the row over `g` is `U(V_g)`; on
/// the diagonal one it is `g·U(g⁻¹V_g)`.
pub fn extend_set(ground: &Ground, eps: &EpsilonAssignment, v: &Subset) -> Result<ExtendedSet> {
    let w = ground.window();
    let model = &ground.model;
    let mut set = ground.empty_set();
    let mut shortfall = 0;
    for g in 0..w.len() {
        let row: Vec<usize> = (0..ground.points()).filter(|&x| v.contains(ground.idx(g, x))).collect();
        if row.is_empty() {
            continue;
        }
        if row.iter().any(|&x| !model.boundary[x]) {
            return Err(Error::Precondition(format!("{} is not a boundary point", ground.name(ground.idx(g, row[0])))));
        }
        match ground.action {
            GroundAction::Translation => {
                for x in extend_points(model, eps, &row) {
                    set.insert(ground.idx(g, x));
                }
            }
            GroundAction::Diagonal => {
                let ginv = w.inverse(g);
                let back: Vec<usize> = row
                    .iter()
                    .map(|&x| model.action.apply(ginv, x))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::InsufficientDomain(format!("{} on the row of {}", w.name(ginv), w.name(g))))?;
                for y in extend_points(model, eps, &back) {
                    match model.action.apply(g, y) {
                        Some(gy) => {
                            set.insert(ground.idx(g, gy));
                        }
                        None if model.boundary[y] => {
                            return Err(Error::InsufficientDomain(format!("{} at {}", w.name(g), model.space.name(y))));
                        }
                        None => shortfall += 1,
                    }
                }
            }
        }
    }
    Ok(ExtendedSet { set, shortfall })
}

#[derive(Clone, Debug)]
pub struct BoundaryExtension {
    pub cover: CoverFamily,
    pub shortfall: usize,
}

/// `𝒰^∂ = {U(V) : V ∈ 𝒱}` for a cover `𝒱` of `Window × ∂X`.
pub fn extend_boundary_cover(v: &CoverFamily, eps: &EpsilonAssignment) -> Result<BoundaryExtension> {
    let ground = &v.ground;
    let mut members = Vec::new();
    let mut shortfall = 0;
    for m in v.members() {
        let e = extend_set(ground, eps, m)?;
        shortfall += e.shortfall;
        members.push(e.set);
    }
    Ok(BoundaryExtension {
        cover: CoverFamily::new(ground.clone(), members)?,
        shortfall,
    })
}

/// First `(member, point)` where `U(V) ∩ (Window × ∂X) ≠ V`.
pub fn restriction_defect(v: &CoverFamily, ext: &CoverFamily) -> Option<(usize, usize)> {
    let ground = &v.ground;
    for (i, (a, b)) in v.members().iter().zip(ext.members()).enumerate() {
        for p in 0..ground.size() {
            let (_, x) = ground.split(p);
            if ground.model.boundary[x] && a.contains(p) != b.contains(p) {
                return Some((i, p));
            }
        }
    }
    None
}

/// `⋂ U(Yᵢ) = U(⋂ Yᵢ)` for every nonempty subfamily of the boundary slices
/// of size at most `max_size`; returns the first failing index set.
pub fn intersection_law(v: &CoverFamily, eps: &EpsilonAssignment, max_size: usize) -> Option<Vec<usize>> {
    let model = &v.ground.model;
    let slices = boundary_slices(v);
    let ext: Vec<BTreeSet<usize>> = slices.iter().map(|s| extend_points(model, eps, s).into_iter().collect()).collect();
    let n = slices.len();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(idx) = stack.pop() {
        if idx.len() >= 2 {
            let mut lhs = ext[idx[0]].clone();
            let mut meet: BTreeSet<usize> = slices[idx[0]].iter().copied().collect();
            for &i in &idx[1..] {
                lhs = lhs.intersection(&ext[i]).copied().collect();
                meet = meet.intersection(&slices[i].iter().copied().collect()).copied().collect();
            }
            let meet: Vec<usize> = meet.into_iter().collect();
            let rhs: BTreeSet<usize> = extend_points(model, eps, &meet).into_iter().collect();
            if lhs != rhs {
                return Some(idx);
            }
        }
        if idx.len() < max_size {
            for j in idx[idx.len() - 1] + 1..n {
                let mut next = idx.clone();
                next.push(j);
                stack.push(next);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivarianceDefect {
    pub mismatches: usize,
    pub checked: usize,
    pub witness: Option<(usize, usize, usize)>,
}

/// `U(hV) = h·U(V)` for generators `h`, compared at points `p` whose
/// preimage `h⁻¹p` is defined and where `U(hV)` could be formed.
pub fn extension_equivariance(v: &CoverFamily, eps: &EpsilonAssignment) -> Result<EquivarianceDefect> {
    let ground = &v.ground;
    let w = ground.window();
    let mut out = EquivarianceDefect {
        mismatches: 0,
        checked: 0,
        witness: None,
    };
    for (i, m) in v.members().iter().enumerate() {
        let um = extend_set(ground, eps, m)?.set;
        for h in w.generator_indices() {
            let hv = ground.translate(h, m);
            let Ok(uhv) = extend_set(ground, eps, &hv) else { continue };
            let huv = ground.translate(h, &um);
            let hinv = w.inverse(h);
            for p in 0..ground.size() {
                let Some(back) = ground.act(hinv, p) else { continue };
                if ground.act(h, back) != Some(p) {
                    continue;
                }
                out.checked += 1;
                if uhv.set.contains(p) != huv.contains(p) {
                    out.mismatches += 1;
                    out.witness.get_or_insert((i, h, p));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct AssembledCover {
    pub cover: CoverFamily,
    pub dim: isize,
    pub dim_boundary: isize,
    pub dim_interior: isize,
    /// `dim 𝒰^∂ + dim 𝒰_∞ + 1`.
    pub bound: isize,
    pub lebesgue: Vec<LebesgueReport>,
}

/// `𝒰^∂ ∪ 𝒰_∞`, which must cover the ground set, with its dimension ledger
/// and Lebesgue checks for the given radii.
pub fn assemble_full_cover(boundary: &CoverFamily, interior: &CoverFamily, alphas: &[Q]) -> Result<AssembledCover> {
    let ground = boundary.ground.clone();
    if !Arc::ptr_eq(&ground, &interior.ground) && interior.ground.size() != ground.size() {
        return Err(Error::Precondition("covers live on different ground sets".into()));
    }
    let interior = CoverFamily::new_allow_empty(ground.clone(), interior.members().to_vec())?;
    let cover = boundary.concat(&interior);
    if cover.is_empty() {
        return Err(Error::EmptyCover);
    }
    let union = cover.union();
    if let Some(p) = (0..ground.size()).find(|&p| !union.contains(p)) {
        return Err(Error::CoverageGap(ground.name(p)));
    }
    let dim_boundary = family_dimension(boundary);
    let dim_interior = family_dimension(&interior);
    let lebesgue = alphas.iter().map(|a| lebesgue_check(&cover, a)).collect::<Result<_>>()?;
    Ok(AssembledCover {
        dim: family_dimension(&cover),
        dim_boundary,
        dim_interior,
        bound: dim_boundary + dim_interior + 1,
        lebesgue,
        cover,
    })
}
