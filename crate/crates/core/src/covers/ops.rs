use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::covers::{CoverFamily, Ground, Subset};
use crate::error::{Error, Result};
use crate::group::GroupWindow;
use crate::q::{self, Q};

/// Result of `B(U, ±α)` with its windowing metadata.
#[derive(Clone, Debug)]
pub struct PaddedSet {
    pub set: Subset,
    /// Radius of the inner window of `|α|`; `None` if it is empty.
    pub inner_radius: Option<u32>,
    /// Set when a pad reaches points outside the inner window, where the
    /// true pad may differ from the windowed one.
    pub flagged: bool,
}

/// Window elements within distance `r` of some source.
pub fn fiber_pad(w: &GroupWindow, sources: &FixedBitSet, r: u32) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(w.len());
    if w.is_convex() {
        let mut depth = vec![u32::MAX; w.len()];
        let mut queue = VecDeque::new();
        for s in sources.ones() {
            depth[s] = 0;
            queue.push_back(s);
        }
        let ngen = w.generators().len();
        while let Some(g) = queue.pop_front() {
            out.insert(g);
            if depth[g] == r {
                continue;
            }
            for j in 0..ngen {
                if let Some(h) = w.step(g, j) {
                    if depth[h] == u32::MAX {
                        depth[h] = depth[g] + 1;
                        queue.push_back(h);
                    }
                }
            }
        }
    } else {
        let srcs: Vec<usize> = sources.ones().collect();
        for h in 0..w.len() {
            if srcs.iter().any(|&s| w.dist(s, h) <= r) {
                out.insert(h);
            }
        }
    }
    out
}

fn check_alpha(alpha: &Q) -> Result<()> {
    if *alpha <= q::zero() {
        return Err(Error::Parameter(format!("radius {} must be positive", q::fmt(alpha))));
    }
    Ok(())
}

/// `B(U, α) = {(h, x) : B(h, α) × {x} ∩ U ≠ ∅}`, exact on the whole window.
pub fn pad(ground: &Ground, u: &Subset, alpha: &Q) -> Result<PaddedSet> {
    check_alpha(alpha)?;
    let w = ground.window();
    let m = ground.points();
    let r = q::open_radius(alpha).min(2 * w.radius() as i64) as u32;
    let inner_radius = w.inner_radius(alpha);
    let mut set = ground.empty_set();
    let mut flagged = false;
    for x in 0..m {
        let mut src = FixedBitSet::with_capacity(w.len());
        for g in 0..w.len() {
            if u.contains(ground.idx(g, x)) {
                src.insert(g);
            }
        }
        if src.is_clear() {
            continue;
        }
        for h in fiber_pad(w, &src, r).ones() {
            set.insert(ground.idx(h, x));
            if inner_radius.is_none_or(|rho| w.word_length(h) > rho) {
                flagged = true;
            }
        }
    }
    Ok(PaddedSet {
        set,
        inner_radius,
        flagged,
    })
}

/// `B(U, −α) = {(h, x) : B(h, α) × {x} ⊆ U}`, restricted to the inner
/// window of `α`, computed as the complement of `B(Uᶜ, α)`.
pub fn shrink(ground: &Ground, u: &Subset, alpha: &Q) -> Result<PaddedSet> {
    let mut comp = u.clone();
    comp.toggle_range(..);
    let padded = pad(ground, &comp, alpha)?;
    let w = ground.window();
    let mut set = ground.empty_set();
    for g in w.inner_window(alpha) {
        for x in 0..ground.points() {
            let p = ground.idx(g, x);
            if !padded.set.contains(p) {
                set.insert(p);
            }
        }
    }
    Ok(PaddedSet {
        set,
        inner_radius: padded.inner_radius,
        flagged: false,
    })
}

/// Checks `B(U, r) ∩ U′ = ∅` for all `U ≠ U′`; returns the first violating
/// `(U, U′, point)` in index order.
pub fn r_disjointness_check(cover: &CoverFamily, r: &Q) -> Result<Option<(usize, usize, usize)>> {
    let pads: Vec<Subset> = cover
        .members()
        .iter()
        .map(|m| pad(&cover.ground, m, r).map(|p| p.set))
        .collect::<Result<_>>()?;
    for (i, p) in pads.iter().enumerate() {
        for (j, m) in cover.members().iter().enumerate() {
            if i != j {
                if let Some(pt) = p.intersection(m).next() {
                    return Ok(Some((i, j, pt)));
                }
            }
        }
    }
    Ok(None)
}
