//! Homotopy S-actions, antidiagonal balls and long covers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use num_traits::Zero;

use crate::covers::{CoverFamily, Ground, GroundAction, Subset};
use crate::error::{Error, Result};
use crate::group::GroupWindow;
use crate::q::{self, Q};
use crate::space::CompactificationModel;

/// A partial self-map of the points.
pub type PMap = Vec<Option<u32>>;

fn compose(f: &PMap, g: &PMap) -> PMap {
    g.iter().map(|y| y.and_then(|y| f[y as usize])).collect()
}

fn agree_where_defined(a: &PMap, b: &PMap) -> Option<usize> {
    a.iter()
        .zip(b)
        .position(|(x, y)| matches!((x, y), (Some(x), Some(y)) if x != y))
}

/// Generator maps `φ_s` for `s ∈ S` and time-sampled homotopies `H_{g,h}`
/// for `g, h ∈ S` with `gh ∈ S`.
#[derive(Clone, Debug)]
pub struct HomotopyActionModel {
    pub model: Arc<CompactificationModel>,
    /// Window indices of `S`, sorted; contains the identity and is symmetric.
    s: Vec<usize>,
    phi: BTreeMap<usize, PMap>,
    h: BTreeMap<(usize, usize), Vec<PMap>>,
    time_grid: Vec<Q>,
    /// `nbr[j][x]`: the `y` with `(g, x) → (g·s_j, y)` an ADB step.
    nbr: Vec<Vec<Vec<u32>>>,
    /// Index of `s_j` as a right step generator, or `None` for `s_j = 1`.
    step_of: Vec<Option<usize>>,
}

impl HomotopyActionModel {
    pub fn new(
        model: Arc<CompactificationModel>,
        s: Vec<usize>,
        phi: BTreeMap<usize, PMap>,
        h: BTreeMap<(usize, usize), Vec<PMap>>,
        time_grid: Vec<Q>,
    ) -> Result<Self> {
        let mut s = s;
        s.sort_unstable();
        s.dedup();
        let mut ha = HomotopyActionModel {
            model,
            s,
            phi,
            h,
            time_grid,
            nbr: Vec::new(),
            step_of: Vec::new(),
        };
        ha.validate()?;
        ha.build_neighbours();
        Ok(ha)
    }

    pub fn window(&self) -> &GroupWindow {
        &self.model.window
    }

    pub fn points(&self) -> usize {
        self.model.len()
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn phi(&self, g: usize) -> Option<&PMap> {
        self.phi.get(&g)
    }

    pub fn homotopies(&self) -> &BTreeMap<(usize, usize), Vec<PMap>> {
        &self.h
    }

    pub fn time_grid(&self) -> &[Q] {
        &self.time_grid
    }

    /// Checks the endpoint and identity laws; the witness is `(g, h, t, x)`.
    pub fn validate(&self) -> Result<()> {
        let w = self.window();
        let n = self.points();
        let id = w.identity();
        let law = |msg: String| Err(Error::HomotopyLaw(msg));
        if !self.s.contains(&id) {
            return law("S does not contain the identity".into());
        }
        if self.s.iter().any(|&g| !self.s.contains(&w.inverse(g))) {
            return law("S is not symmetric".into());
        }
        let grid = &self.time_grid;
        if grid.first() != Some(&q::zero()) || grid.last() != Some(&q::one()) || grid.windows(2).any(|p| p[0] >= p[1]) {
            return law("time grid must increase from 0 to 1".into());
        }
        for &g in &self.s {
            match self.phi.get(&g) {
                Some(m) if m.len() == n => {}
                _ => return law(format!("missing or malformed φ_{}", w.name(g))),
            }
        }
        let identity: PMap = (0..n as u32).map(Some).collect();
        if self.phi[&id] != identity {
            return law("φ_1 is not the identity".into());
        }
        for &g in &self.s {
            for &h in &self.s {
                let Some(gh) = w.mul(g, h) else { continue };
                if !self.s.contains(&gh) {
                    continue;
                }
                let name = format!("({}, {})", w.name(g), w.name(h));
                let Some(samples) = self.h.get(&(g, h)) else {
                    return law(format!("missing H_{name}"));
                };
                if samples.len() != grid.len() || samples.iter().any(|m| m.len() != n) {
                    return law(format!("H_{name} does not match the time grid"));
                }
                let start = compose(&self.phi[&g], &self.phi[&h]);
                if let Some(x) = agree_where_defined(&samples[0], &start) {
                    return law(format!("{name}, t=0/1, x={}", self.model.space.name(x)));
                }
                if let Some(x) = agree_where_defined(&samples[grid.len() - 1], &self.phi[&gh]) {
                    return law(format!("{name}, t=1/1, x={}", self.model.space.name(x)));
                }
                if g == id && h == id {
                    for (t, m) in samples.iter().enumerate() {
                        if *m != identity {
                            return law(format!("{name}, t={}, H_(1,1) is not the identity", q::fmt(&grid[t])));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `F_g = {H^t_{r,s} : rs = g}` as a deduplicated list of maps.
    pub fn f_set(&self, g: usize) -> Vec<&PMap> {
        let w = self.window();
        let mut seen: BTreeSet<&PMap> = BTreeSet::new();
        for (&(r, s), samples) in &self.h {
            if w.mul(r, s) == Some(g) {
                seen.extend(samples.iter());
            }
        }
        seen.into_iter().collect()
    }

    fn build_neighbours(&mut self) {
        let w = self.model.window.clone();
        let n = self.points();
        let gens = w.generator_indices();
        let mut nbr = Vec::new();
        let mut step_of = Vec::new();
        for &s in &self.s {
            let mut sets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
            for f in self.f_set(w.inverse(s)) {
                for x in 0..n {
                    if let Some(y) = f[x] {
                        sets[x].insert(y);
                    }
                }
            }
            for f in self.f_set(s) {
                for y in 0..n {
                    if let Some(x) = f[y] {
                        sets[x as usize].insert(y as u32);
                    }
                }
            }
            nbr.push(sets.into_iter().map(|s| s.into_iter().collect()).collect());
            step_of.push(gens.iter().position(|&t| t == s));
        }
        self.nbr = nbr;
        self.step_of = step_of;
    }

    fn right_mul(&self, g: usize, j: usize) -> Option<usize> {
        let w = self.window();
        match self.step_of[j] {
            Some(k) => w.step(g, k),
            None => w.mul(g, self.s[j]),
        }
    }

    /// `ADBⁿ(A)` on a translation ground set, with its clipping flag.
    pub fn adb(&self, ground: &Ground, a: &Subset, n: usize) -> Result<AdbSet> {
        self.check_ground(ground)?;
        let mut set = a.clone();
        let mut frontier: Vec<usize> = a.ones().collect();
        let mut clipped = false;
        for _ in 0..n {
            let mut next = Vec::new();
            for &p in &frontier {
                let (g, x) = ground.split(p);
                for j in 0..self.s.len() {
                    let ys = &self.nbr[j][x];
                    if ys.is_empty() {
                        continue;
                    }
                    let Some(gs) = self.right_mul(g, j) else {
                        clipped = true;
                        continue;
                    };
                    for &y in ys {
                        let qi = ground.idx(gs, y as usize);
                        if !set.put(qi) {
                            next.push(qi);
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(AdbSet { set, n, clipped })
    }

    /// ADB distance levels from a single seed up to `n`: `level[p]` is the
    /// least `r` with `p ∈ ADB^r`.
    pub fn adb_levels(&self, ground: &Ground, seed: usize, n: usize) -> (Vec<(usize, u32)>, bool) {
        let mut out = vec![(seed, 0u32)];
        let mut seen = BTreeSet::from([seed]);
        let mut queue = VecDeque::from([(seed, 0u32)]);
        let mut clipped = false;
        while let Some((p, d)) = queue.pop_front() {
            if d as usize == n {
                continue;
            }
            let (g, x) = ground.split(p);
            for j in 0..self.s.len() {
                let ys = &self.nbr[j][x];
                if ys.is_empty() {
                    continue;
                }
                let Some(gs) = self.right_mul(g, j) else {
                    clipped = true;
                    continue;
                };
                for &y in ys {
                    let qi = ground.idx(gs, y as usize);
                    if seen.insert(qi) {
                        out.push((qi, d + 1));
                        queue.push_back((qi, d + 1));
                    }
                }
            }
        }
        (out, clipped)
    }

    pub(crate) fn check_ground(&self, ground: &Ground) -> Result<()> {
        if ground.action != GroundAction::Translation {
            return Err(Error::Precondition("ADB lives on the translation ground set".into()));
        }
        if ground.points() != self.points() || ground.window().len() != self.window().len() {
            return Err(Error::Precondition("ground set does not match the homotopy action".into()));
        }
        Ok(())
    }

    /// Maps `x ↦ f(x)` for all `f ∈ F_s`, `s ∈ S`, as `(s, f)` pairs; the
    /// maps entering the antidiagonal Lipschitz constants.
    pub fn f_maps(&self) -> Vec<(usize, &PMap)> {
        let mut out = Vec::new();
        for &s in &self.s {
            for f in self.f_set(s) {
                out.push((s, f));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct AdbSet {
    pub set: Subset,
    pub n: usize,
    /// Some step wanted to leave the window.
    pub clipped: bool,
}

/// Constant homotopies `H^t_{g,h} = φ_g ∘ φ_h` from a genuine action.
///
/// `s` are window indices (the identity is added, inverses must be present);
/// every `φ_g` with `g ∈ S` must be defined on `required`.
pub fn genuine_to_homotopy(model: Arc<CompactificationModel>, s: &[usize], required: &[usize]) -> Result<HomotopyActionModel> {
    let w = model.window.clone();
    let mut s: Vec<usize> = s.to_vec();
    s.push(w.identity());
    s.sort_unstable();
    s.dedup();
    let n = model.len();
    let mut phi = BTreeMap::new();
    for &g in &s {
        let m: PMap = (0..n).map(|x| model.action.apply(g, x).map(|y| y as u32)).collect();
        if let Some(&x) = required.iter().find(|&&x| m[x].is_none()) {
            return Err(Error::InsufficientDomain(format!(
                "{} is undefined at {}",
                w.name(g),
                model.space.name(x)
            )));
        }
        phi.insert(g, m);
    }
    let mut h = BTreeMap::new();
    for &g in &s {
        for &k in &s {
            let Some(gk) = w.mul(g, k) else { continue };
            if s.contains(&gk) {
                let c = compose(&phi[&g], &phi[&k]);
                h.insert((g, k), vec![c.clone(), c]);
            }
        }
    }
    HomotopyActionModel::new(model, s, phi, h, vec![q::zero(), q::one()])
}

/// The symmetric generating set of the window together with the identity.
pub fn standard_s(w: &GroupWindow) -> Vec<usize> {
    let mut s = w.generator_indices();
    s.push(w.identity());
    s.sort_unstable();
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NLongReport {
    pub n: usize,
    pub passed: bool,
    /// Some ADB set was clipped; a pass is then not claimed.
    pub inconclusive: bool,
    pub witness: Option<usize>,
    pub checked: usize,
    pub inner_radius: u32,
}

/// For every `(g, x)` with `g` in the inner window of `n + 1`, some member
/// contains `ADBⁿ(g, x)`.
pub fn n_long_check(cover: &CoverFamily, ha: &HomotopyActionModel, n: usize) -> Result<NLongReport> {
    let alpha = q::int(n as i64 + 1);
    let Some(rho) = cover.ground.window().inner_radius(&alpha) else {
        return Err(Error::Parameter(format!("inner window of {} is empty", n + 1)));
    };
    n_long_check_within(cover, ha, n, rho)
}

/// `n_long_check` with the seeds restricted to `|g| ≤ rho`.
pub fn n_long_check_within(cover: &CoverFamily, ha: &HomotopyActionModel, n: usize, rho: u32) -> Result<NLongReport> {
    let ground = &cover.ground;
    ha.check_ground(ground)?;
    let w = ground.window();
    let inc = cover.incidence();
    let mut checked = 0;
    let mut inconclusive = false;
    for g in (0..w.len()).take_while(|&g| w.word_length(g) <= rho) {
        for x in 0..ground.points() {
            let seed = ground.idx(g, x);
            let (levels, clipped) = ha.adb_levels(ground, seed, n);
            inconclusive |= clipped;
            checked += 1;
            let fits = inc[seed].iter().any(|&u| {
                let m = cover.member(u as usize);
                levels.iter().all(|&(p, _)| m.contains(p))
            });
            if !fits {
                return Ok(NLongReport {
                    n,
                    passed: false,
                    inconclusive,
                    witness: Some(seed),
                    checked,
                    inner_radius: rho,
                });
            }
        }
    }
    Ok(NLongReport {
        n,
        passed: !inconclusive,
        inconclusive,
        witness: None,
        checked,
        inner_radius: rho,
    })
}

/// Product metric `max(d_G, d_X)` on the ground set.
pub fn product_dist(ground: &Ground, p: usize, q: usize) -> Q {
    let (g, x) = ground.split(p);
    let (h, y) = ground.split(q);
    let dg = q::int(ground.window().dist(g, h) as i64);
    let dx = ground.model.space.dist(x, y);
    dg.max(dx)
}

/// Open `δ`-neighbourhood of `a` in the product metric, inside the window.
pub fn product_ball(ground: &Ground, a: &Subset, delta: &Q) -> Subset {
    let w = ground.window();
    let space = &ground.model.space;
    let mut out = ground.empty_set();
    if *delta <= Q::zero() {
        return out;
    }
    let r = q::open_radius(delta).min(2 * w.radius() as i64) as u32;
    let xballs: Vec<Vec<usize>> = (0..ground.points()).map(|x| space.open_ball(x, delta)).collect();
    for p in a.ones() {
        let (g, x) = ground.split(p);
        for h in w.closed_ball(g, r) {
            for &y in &xballs[x] {
                out.insert(ground.idx(h, y));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusReport {
    pub delta: Q,
    pub candidates: usize,
    pub clipped: bool,
}

/// Largest `δ` among the realized product distances (capped at
/// `min(ε, diameter)`, which is itself a candidate) with
/// `ADBⁿ(B(A, δ)) ⊆ B(ADBⁿ(A), ε)`. Balls are open.
pub fn adb_modulus_probe(ha: &HomotopyActionModel, ground: &Ground, a: &Subset, n: usize, eps: &Q) -> Result<ModulusReport> {
    if *eps <= Q::zero() {
        return Err(Error::Parameter("ε must be positive".into()));
    }
    let w = ground.window();
    let space = &ground.model.space;
    let diam = q::int(2 * w.radius() as i64).max(space.diameter());
    let cap = (*eps).min(diam);
    let mut cands: BTreeSet<Q> = space.realized_distances().into_iter().filter(|d| *d <= cap).collect();
    for k in 1..=2 * w.radius() as i64 {
        if q::int(k) <= cap {
            cands.insert(q::int(k));
        }
    }
    cands.insert(cap);
    let cands: Vec<Q> = cands.into_iter().collect();
    let base = ha.adb(ground, a, n)?;
    let target = product_ball(ground, &base.set, eps);
    let mut clipped = base.clipped;
    let mut holds = |d: &Q| -> Result<bool> {
        let lhs = ha.adb(ground, &product_ball(ground, a, d), n)?;
        clipped |= lhs.clipped;
        Ok(lhs.set.is_subset(&target))
    };
    // monotone in δ: binary search for the last passing candidate
    let (mut lo, mut hi) = (0usize, cands.len());
    if !holds(&cands[0])? {
        return Err(Error::Precondition("smallest candidate fails; A is not inside the window".into()));
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if holds(&cands[mid])? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ModulusReport {
        delta: cands[lo],
        candidates: cands.len(),
        clipped,
    })
}
