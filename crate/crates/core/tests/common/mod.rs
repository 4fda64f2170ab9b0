#![allow(dead_code)]

use std::sync::Arc;

use ccw_core::covers::{CoverFamily, Ground, GroundAction, Subset};
use ccw_core::group::{GroupSpec, GroupWindow};
use ccw_core::q::{self, Q};
use ccw_core::space::{interval_compactification, CompactificationModel};

pub fn window(spec: GroupSpec, r: u32) -> Arc<GroupWindow> {
    Arc::new(GroupWindow::build(&spec, r).unwrap())
}

pub fn ground_of(model: CompactificationModel, action: GroundAction) -> Arc<Ground> {
    Arc::new(Ground::new(Arc::new(model), action, usize::MAX).unwrap())
}

/// `Z`-window of radius `r` times `m` fixed points.
pub fn z_trivial(r: u32, m: usize) -> Arc<Ground> {
    let w = window(GroupSpec::integers(), r);
    ground_of(CompactificationModel::trivial(w, m).unwrap(), GroundAction::Translation)
}

pub fn interval(r: u32, action: GroundAction) -> Arc<Ground> {
    ground_of(interval_compactification(window(GroupSpec::integers(), r)).unwrap(), action)
}

pub fn z_value(w: &GroupWindow, g: usize) -> i64 {
    w.name(g).parse().unwrap()
}

pub fn z_index(w: &GroupWindow, z: i64) -> usize {
    w.lookup(&z.to_string()).unwrap()
}

/// Set-comprehension form of `B(U, α)` over the whole window.
pub fn pad_oracle(ground: &Ground, u: &Subset, alpha: &Q) -> Subset {
    let w = ground.window();
    let mut out = ground.empty_set();
    for h in 0..w.len() {
        for x in 0..ground.points() {
            let hit = (0..w.len()).any(|g| q::int(w.dist(h, g) as i64) < *alpha && u.contains(ground.idx(g, x)));
            if hit {
                out.insert(ground.idx(h, x));
            }
        }
    }
    out
}

/// Set-comprehension form of `B(U, −α)` over the inner window of `α`.
pub fn shrink_oracle(ground: &Ground, u: &Subset, alpha: &Q) -> Subset {
    let w = ground.window();
    let mut out = ground.empty_set();
    for h in 0..w.len() {
        if q::int(w.word_length(h) as i64) + *alpha > q::int(w.radius() as i64 + 1) {
            continue;
        }
        for x in 0..ground.points() {
            let inside = (0..w.len()).all(|g| q::int(w.dist(h, g) as i64) >= *alpha || u.contains(ground.idx(g, x)));
            if inside {
                out.insert(ground.idx(h, x));
            }
        }
    }
    out
}

/// Direct reading of the G-Lebesgue condition.
pub fn lebesgue_oracle(cover: &CoverFamily, alpha: &Q) -> bool {
    let ground = &cover.ground;
    let w = ground.window();
    (0..w.len())
        .filter(|&g| q::int(w.word_length(g) as i64) + *alpha <= q::int(w.radius() as i64 + 1))
        .all(|g| {
            (0..ground.points()).all(|x| {
                cover.members().iter().any(|m| {
                    (0..w.len()).all(|h| q::int(w.dist(g, h) as i64) >= *alpha || m.contains(ground.idx(h, x)))
                })
            })
        })
}

pub fn dimension_oracle(cover: &CoverFamily) -> isize {
    if cover.is_empty() {
        return -1;
    }
    (0..cover.ground.size())
        .map(|p| cover.members().iter().filter(|m| m.contains(p)).count() as isize)
        .max()
        .unwrap()
        - 1
}

pub fn subset_from_bits(ground: &Ground, bits: u64) -> Subset {
    let mut s = ground.empty_set();
    for p in 0..ground.size() {
        if bits >> (p % 64) & 1 == 1 {
            s.insert(p);
        }
    }
    s
}
