use std::collections::BTreeSet;

use crate::covers::{family_dimension, lebesgue_check, CoverFamily, FamilyPredicate, GroundAction};
use crate::error::{Error, Result};
use crate::q::{self, Q};

#[derive(Clone, Debug)]
pub struct ZeroDimReport {
    pub alpha: Q,
    pub passed: bool,
    /// `(member, ground point)` where `U` differs from `inner × U_X`.
    pub witness: Option<(usize, usize)>,
    /// `U_X = {x : (1, x) ∈ U}` per member.
    pub slices: Vec<Vec<usize>>,
    /// Number of distinct translates `g·U_X` inside the window.
    pub orbit_sizes: Vec<usize>,
    /// Window elements fixing `U_X` setwise.
    pub stabilizers: Vec<Vec<usize>>,
    pub inner_radius: u32,
}

/// For a disjoint cover with G-Lebesgue number `α > 1`, every member agrees
/// with `inner(α) × U_X` on `inner(α) × X̄`.
pub fn zero_dim_structure_check(cover: &CoverFamily, alpha: &Q) -> Result<ZeroDimReport> {
    if cover.is_empty() {
        return Err(Error::EmptyCover);
    }
    if *alpha <= q::one() {
        return Err(Error::Precondition("α must exceed 1".into()));
    }
    let dim = family_dimension(cover);
    if dim != 0 {
        return Err(Error::Precondition(format!("family dimension is {dim}, not 0")));
    }
    let leb = lebesgue_check(cover, alpha)?;
    if !leb.passed {
        return Err(Error::Precondition(format!(
            "G-Lebesgue number {} fails at {}",
            q::fmt(alpha),
            cover.ground.name(leb.witness.unwrap_or(0))
        )));
    }
    let ground = &cover.ground;
    let w = ground.window();
    let inner = w.inner_window(alpha);
    let m = ground.points();
    let mut witness = None;
    let mut slices = Vec::new();
    let mut orbit_sizes = Vec::new();
    let mut stabilizers = Vec::new();
    for (i, u) in cover.members().iter().enumerate() {
        let slice: Vec<usize> = (0..m).filter(|&x| u.contains(ground.idx(w.identity(), x))).collect();
        let mut mask = vec![false; m];
        for &x in &slice {
            mask[x] = true;
        }
        if witness.is_none() {
            'scan: for &g in &inner {
                for (x, &inside) in mask.iter().enumerate() {
                    if u.contains(ground.idx(g, x)) != inside {
                        witness = Some((i, ground.idx(g, x)));
                        break 'scan;
                    }
                }
            }
        }
        let mut orbit = BTreeSet::new();
        let mut stab = Vec::new();
        for g in 0..w.len() {
            let image: Option<BTreeSet<usize>> = slice.iter().map(|&x| act_point(cover, g, x)).collect();
            if let Some(image) = image {
                if image.iter().copied().eq(slice.iter().copied()) {
                    stab.push(g);
                }
                orbit.insert(image);
            }
        }
        slices.push(slice);
        orbit_sizes.push(orbit.len());
        stabilizers.push(stab);
    }
    Ok(ZeroDimReport {
        alpha: *alpha,
        passed: witness.is_none(),
        witness,
        slices,
        orbit_sizes,
        stabilizers,
        inner_radius: leb.inner_radius,
    })
}

fn act_point(cover: &CoverFamily, g: usize, x: usize) -> Option<usize> {
    match cover.ground.action {
        GroundAction::Diagonal => cover.ground.model.action.apply(g, x),
        GroundAction::Translation => Some(x),
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    /// First member containing `B(1, α) × {x}`.
    pub member: usize,
    /// Per `zᵢ`: `zᵢ U = U` on the window.
    pub stabilizes: Vec<bool>,
    /// `⟨z⟩` fails the family predicate.
    pub violation: bool,
}

/// Commuting elements fixing `x` stabilize the member around `B(1, α) × {x}`,
/// so the subgroup they generate lies in a stabilizer.
pub fn abelian_obstruction_check(
    cover: &CoverFamily,
    alpha: &Q,
    z: &[usize],
    x: usize,
    family: &FamilyPredicate,
) -> Result<ObstructionReport> {
    if cover.is_empty() {
        return Err(Error::EmptyCover);
    }
    let ground = &cover.ground;
    let w = ground.window();
    if x >= ground.points() {
        return Err(Error::Parameter(format!("point {x} out of range")));
    }
    let r = q::open_radius(alpha);
    for &zi in z {
        if i64::from(w.word_length(zi)) > r {
            return Err(Error::Precondition(format!("{} is outside B(1, {})", w.name(zi), q::fmt(alpha))));
        }
        if act_point(cover, zi, x) != Some(x) {
            return Err(Error::Precondition(format!("{} does not fix the point", w.name(zi))));
        }
    }
    for (a, &za) in z.iter().enumerate() {
        for &zb in &z[a + 1..] {
            if !w.group().commute(w.elem(za), w.elem(zb)) {
                return Err(Error::Precondition(format!("{} and {} do not commute", w.name(za), w.name(zb))));
            }
        }
    }
    let ball = w.ball(w.identity(), alpha)?;
    let member = (0..cover.len())
        .find(|&i| ball.members.iter().all(|&h| cover.member(i).contains(ground.idx(h, x))))
        .ok_or_else(|| Error::Lebesgue(format!("no member contains B(1, {}) × {{x}}", q::fmt(alpha))))?;
    let u = cover.member(member);
    let stabilizes = z
        .iter()
        .map(|&zi| {
            let fwd = ground.translate(zi, u);
            let back = ground.translate(w.inverse(zi), u);
            fwd.is_subset(u) && back.is_subset(u)
        })
        .collect();
    let elems: Vec<_> = z.iter().map(|&zi| w.elem(zi).clone()).collect();
    Ok(ObstructionReport {
        member,
        stabilizes,
        violation: !family.contains(w.group(), &elems),
    })
}
