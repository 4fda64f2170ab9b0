//! Orbit spaces of finite group actions and equivariant refinements.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::covers::{CoverFamily, Ground, GroundAction};
use crate::error::{Error, Result};
use crate::group::GroupWindow;
use crate::space::{CompactificationModel, FiniteMetricSpace, PartialAction};

/// Sets of points, each sorted.
pub type PointFamily = Vec<Vec<usize>>;

#[derive(Clone, Debug)]
pub struct QuotientSpace {
    /// Orbits, ordered by least point.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// `d′([y], [y′]) = min_h d(hy, y′)`.
    pub space: FiniteMetricSpace,
}

impl QuotientSpace {
    pub fn project(&self, set: &[usize]) -> Vec<usize> {
        let s: BTreeSet<usize> = set.iter().map(|&y| self.class_of[y]).collect();
        s.into_iter().collect()
    }

    pub fn preimage(&self, classes: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = classes.iter().flat_map(|&c| self.classes[c].iter().copied()).collect();
        v.sort_unstable();
        v
    }
}

/// Orbit space of a total isometric action of a finite window.
pub fn quotient_space(y: &FiniteMetricSpace, w: &GroupWindow, action: &PartialAction) -> Result<QuotientSpace> {
    let n = y.len();
    if action.points() != n || action.group_size() != w.len() {
        return Err(Error::InvalidSpec("action does not match the space".into()));
    }
    for g in 0..w.len() {
        if !action.is_total_for(g) {
            return Err(Error::InsufficientDomain(format!("{} is not defined everywhere", w.name(g))));
        }
    }
    action.check_isometry(w, y)?;
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let orbit: BTreeSet<usize> = (0..w.len()).map(|g| action.apply(g, x).unwrap()).collect();
        for &z in &orbit {
            class_of[z] = classes.len();
        }
        classes.push(orbit.into_iter().collect::<Vec<_>>());
    }
    let names = classes
        .iter()
        .map(|c: &Vec<usize>| format!("[{}]", y.name(c[0])))
        .collect();
    let space = FiniteMetricSpace::new(names, |a, b| {
        let (ya, yb) = (classes[a][0], classes[b][0]);
        (0..w.len()).map(|h| y.dist(action.apply(h, ya).unwrap(), yb)).min().unwrap()
    })?;
    Ok(QuotientSpace { classes, class_of, space })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub members: PointFamily,
    /// Input member containing each output member.
    pub source: Vec<usize>,
    pub dimension: isize,
    /// Output members equal to an input member.
    pub unchanged: usize,
    /// `false` when the greedy branch was used.
    pub optimal: bool,
}

/// Size up to which the refinement is searched exactly.
pub const EXACT_REFINEMENT_LIMIT: usize = 16;

/// A refinement of least dimension that keeps as many input members as
/// possible, ties broken by the lexicographically least kept index set.
///
/// Dimension 0 is always reachable (assign each point to one member), so
/// the search is a maximum packing of pairwise disjoint input members; the
/// remaining points go to the lowest-index member containing them.
pub fn min_dim_refinement(points: usize, cover: &[Vec<usize>]) -> Result<Refinement> {
    for x in 0..points {
        if !cover.iter().any(|m| m.contains(&x)) {
            return Err(Error::CoverageGap(format!("point {x}")));
        }
    }
    let mut distinct: Vec<usize> = Vec::new();
    for (i, m) in cover.iter().enumerate() {
        if !m.is_empty() && !distinct.iter().any(|&j| cover[j] == *m) {
            distinct.push(i);
        }
    }
    let exact = points <= EXACT_REFINEMENT_LIMIT;
    let kept = if exact {
        let masks: Vec<u32> = distinct.iter().map(|&i| cover[i].iter().fold(0u32, |a, &x| a | 1 << x)).collect();
        let mut best = Vec::new();
        let mut cur = Vec::new();
        pack(&masks, 0, 0, &mut cur, &mut best);
        best.into_iter().map(|k| distinct[k]).collect::<Vec<_>>()
    } else {
        let mut order = distinct.clone();
        order.sort_by_key(|&i| (cover[i].len(), i));
        let mut used = vec![false; points];
        let mut kept = Vec::new();
        for i in order {
            if cover[i].iter().all(|&x| !used[x]) {
                for &x in &cover[i] {
                    used[x] = true;
                }
                kept.push(i);
            }
        }
        kept.sort_unstable();
        kept
    };
    let mut used = vec![false; points];
    let mut members = Vec::new();
    let mut source = Vec::new();
    for &i in &kept {
        for &x in &cover[i] {
            used[x] = true;
        }
        members.push(cover[i].clone());
        source.push(i);
    }
    let mut rest: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in (0..points).filter(|&x| !used[x]) {
        let i = cover.iter().position(|m| m.contains(&x)).expect("covered");
        rest.entry(i).or_default().push(x);
    }
    for (i, block) in rest {
        members.push(block);
        source.push(i);
    }
    let unchanged = members.iter().filter(|m| cover.contains(m)).count();
    Ok(Refinement {
        dimension: if members.is_empty() { -1 } else { 0 },
        members,
        source,
        unchanged,
        optimal: exact,
    })
}

fn pack(masks: &[u32], from: usize, used: u32, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    if cur.len() + (masks.len() - from) <= best.len() {
        return;
    }
    for i in from..masks.len() {
        if cur.len() + (masks.len() - i) <= best.len() {
            return;
        }
        if masks[i] & used == 0 {
            cur.push(i);
            pack(masks, i + 1, used | masks[i], cur, best);
            cur.pop();
        }
    }
}

#[derive(Clone, Debug)]
pub struct EquivariantLift {
    pub members: PointFamily,
    /// `U_V` chosen for each refinement member.
    pub choice: Vec<usize>,
    /// Indices into `members` coming from each refinement member.
    pub parts: Vec<Vec<usize>>,
}

/// `𝒲 = {q⁻¹(V) ∩ hU_V}` with `U_V` the lowest-index member of `𝒰` whose
/// image contains `V`.
pub fn equivariant_lift(
    refinement: &[Vec<usize>],
    cover: &[Vec<usize>],
    quotient: &QuotientSpace,
    w: &GroupWindow,
    action: &PartialAction,
) -> Result<EquivariantLift> {
    let images: Vec<Vec<usize>> = cover.iter().map(|u| quotient.project(u)).collect();
    let mut members = Vec::new();
    let mut choice = Vec::new();
    let mut parts = Vec::new();
    for (vi, v) in refinement.iter().enumerate() {
        let u = images
            .iter()
            .position(|img| v.iter().all(|c| img.contains(c)))
            .ok_or(Error::Assignment(vi))?;
        let pre: BTreeSet<usize> = quotient.preimage(v).into_iter().collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut idx = Vec::new();
        for h in 0..w.len() {
            let hu: BTreeSet<usize> = cover[u]
                .iter()
                .map(|&y| action.apply(h, y))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InsufficientDomain(w.name(h)))?;
            let part: Vec<usize> = pre.intersection(&hu).copied().collect();
            if !part.is_empty() && seen.insert(part.clone()) {
                idx.push(members.len());
                members.push(part);
            }
        }
        choice.push(u);
        parts.push(idx);
    }
    Ok(EquivariantLift { members, choice, parts })
}

/// `{Window × W}` on the diagonal ground set of the model, so that the cover
/// checkers apply to families of points.
pub fn as_fiber_cover(model: Arc<CompactificationModel>, family: &[Vec<usize>]) -> Result<CoverFamily> {
    let n = model.window.len();
    let ground = Arc::new(Ground::new(model, GroundAction::Diagonal, usize::MAX)?);
    let members = family.iter().map(|f| ground.product(0..n, f)).collect();
    CoverFamily::new(ground, members)
}

/// `max_x #{W ∋ x} − 1`.
pub fn point_family_dimension(points: usize, family: &[Vec<usize>]) -> isize {
    if family.is_empty() {
        return -1;
    }
    let mut count = vec![0isize; points];
    for m in family {
        for &x in m {
            count[x] += 1;
        }
    }
    count.into_iter().max().unwrap_or(0) - 1
}
