//! Deterministic instance builders. Randomized builders take an explicit
//! seed.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covers::{family_dimension, lebesgue_check, CoverFamily, Ground, Subset};
use crate::error::{Error, Result};
use crate::group::{Elem, GroupSpec, GroupWindow};
use crate::homotopy::{HomotopyActionModel, PMap};
use crate::q::{self, Q};
use crate::space::{interval_compactification, CompactificationModel, FiniteMetricSpace, PartialAction};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn z_coord(w: &GroupWindow, g: usize) -> i64 {
    match w.elem(g) {
        Elem::Lattice(v) => v[0],
        _ => unreachable!("not a window of Z"),
    }
}

/// `layers` shifted partitions of `Z` into intervals of length `l`, each
/// brick times all points. Layer `j` is offset by `j·l/layers`.
pub fn brick_cover(ground: Arc<Ground>, l: u32, layers: u32) -> Result<CoverFamily> {
    let w = ground.window();
    if *w.spec() != GroupSpec::integers() {
        return Err(Error::Parameter("brick covers live on windows of Z".into()));
    }
    if l == 0 || layers == 0 {
        return Err(Error::Parameter("brick length and layer count must be positive".into()));
    }
    let all: Vec<usize> = (0..ground.points()).collect();
    let mut bricks: BTreeMap<(u32, i64), Vec<usize>> = BTreeMap::new();
    for g in 0..w.len() {
        let z = z_coord(w, g);
        for j in 0..layers {
            let off = (j * l / layers) as i64;
            bricks.entry((j, (z - off).div_euclid(l as i64))).or_default().push(g);
        }
    }
    let members = bricks.into_values().map(|elems| ground.product(elems, &all)).collect();
    CoverFamily::new(ground, members)
}

/// The G-Lebesgue number of an unclipped brick cover.
pub fn brick_lebesgue(l: u32, layers: u32) -> i64 {
    let l = l as i64;
    (l - l / layers as i64 + 2) / 2
}

/// `{G × B}` for the given blocks of points.
pub fn fiber_blocks_cover(ground: Arc<Ground>, blocks: &[Vec<usize>]) -> Result<CoverFamily> {
    let n = ground.window().len();
    let members = blocks.iter().map(|b| ground.product(0..n, b)).collect();
    CoverFamily::new(ground, members)
}

/// `{G × {x}}` for the listed points.
pub fn fiber_cover(ground: Arc<Ground>, points: &[usize]) -> Result<CoverFamily> {
    let blocks: Vec<Vec<usize>> = points.iter().map(|&x| vec![x]).collect();
    fiber_blocks_cover(ground, &blocks)
}

/// `{G × {−∞}, G × {+∞}, G × interior}` on a compactification.
pub fn boundary_split_cover(ground: Arc<Ground>) -> Result<CoverFamily> {
    let m = &ground.model;
    let mut blocks: Vec<Vec<usize>> = m.boundary_points().into_iter().map(|x| vec![x]).collect();
    blocks.push(m.interior_points());
    blocks.retain(|b| !b.is_empty());
    fiber_blocks_cover(ground, &blocks)
}

/// `{G × C_w}` over the boundary cylinders `C_w` of words `w` of length
/// `level`, on a tree model whose points are named by their words.
pub fn cylinder_cover(ground: Arc<Ground>, level: usize) -> Result<CoverFamily> {
    let m = &ground.model;
    let mut blocks: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for x in m.boundary_points() {
        let name = m.space.name(x);
        if name.chars().count() < level {
            return Err(Error::Parameter(format!("cylinder level {level} exceeds the depth of {name}")));
        }
        blocks.entry(name.chars().take(level).collect()).or_default().push(x);
    }
    let blocks: Vec<Vec<usize>> = blocks.into_values().collect();
    fiber_blocks_cover(ground, &blocks)
}

/// A disjoint cover with G-Lebesgue number `alpha`: a random partition of
/// the points into fibers, then random reassignments of single ground
/// points, each kept only when the Lebesgue check still passes.
pub fn random_zero_dim_cover(ground: Arc<Ground>, alpha: &Q, moves: usize, seed: u64) -> Result<CoverFamily> {
    let mut r = rng(seed);
    let m = ground.points();
    let blocks_n = r.gen_range(1..=m.min(4));
    let mut owner: Vec<usize> = (0..m).map(|x| if x < blocks_n { x } else { r.gen_range(0..blocks_n) }).collect();
    owner.shuffle(&mut r);
    let n = ground.window().len();
    let mut members: Vec<Subset> = (0..blocks_n)
        .map(|b| {
            let pts: Vec<usize> = (0..m).filter(|&x| owner[x] == b).collect();
            ground.product(0..n, &pts)
        })
        .collect();
    for _ in 0..moves {
        let p = r.gen_range(0..ground.size());
        let from = members.iter().position(|u| u.contains(p)).expect("partition");
        let to = r.gen_range(0..=members.len());
        if to == from {
            continue;
        }
        let mut trial = members.clone();
        trial[from].set(p, false);
        if to == trial.len() {
            trial.push(ground.empty_set());
        }
        trial[to].insert(p);
        trial.retain(|u| !u.is_clear());
        let cover = CoverFamily::new(ground.clone(), trial.clone())?;
        if lebesgue_check(&cover, alpha)?.passed {
            members = trial;
        }
    }
    let cover = CoverFamily::new(ground, members)?;
    debug_assert_eq!(family_dimension(&cover), 0);
    Ok(cover)
}

/// Integer lattice box `[−R, R]ⁿ` for a window of `Zⁿ`, acted on by
/// translation where the result stays in the box; `ℓ∞` metric.
pub fn lattice_grid_model(window: Arc<GroupWindow>) -> Result<CompactificationModel> {
    let GroupSpec::FreeAbelian { rank } = window.spec().clone() else {
        return Err(Error::Parameter("grid models need a window of Z^n".into()));
    };
    let r = window.radius() as i64;
    let side = (2 * r + 1) as usize;
    let total = side.pow(rank as u32);
    let coords: Vec<Vec<i64>> = (0..total)
        .map(|mut i| {
            (0..rank)
                .map(|_| {
                    let c = (i % side) as i64 - r;
                    i /= side;
                    c
                })
                .collect()
        })
        .collect();
    let index = |v: &[i64]| -> Option<usize> {
        let mut i = 0usize;
        for c in v.iter().rev() {
            if c.abs() > r {
                return None;
            }
            i = i * side + (c + r) as usize;
        }
        Some(i)
    };
    let names = coords
        .iter()
        .map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    let space = FiniteMetricSpace::new_unchecked(names, |x, y| {
        q::int(coords[x].iter().zip(&coords[y]).map(|(a, b)| (a - b).abs()).max().unwrap_or(0))
    })?;
    let shifts: Vec<Vec<i64>> = window
        .elements()
        .iter()
        .map(|e| match e {
            Elem::Lattice(v) => v.clone(),
            _ => unreachable!(),
        })
        .collect();
    let action = PartialAction::from_fn(window.len(), total, |g, x| {
        let v: Vec<i64> = coords[x].iter().zip(&shifts[g]).map(|(a, b)| a + b).collect();
        index(&v)
    });
    CompactificationModel::new(window, space, vec![false; total], action)
}

/// A finite group acting on itself by left multiplication, with the word
/// metric. The window must contain the whole group.
pub fn regular_model(window: Arc<GroupWindow>) -> Result<CompactificationModel> {
    let n = window.len();
    if !window.group().is_finite() || window.group().finite_diameter().is_none_or(|d| window.radius() < d) {
        return Err(Error::Parameter("regular models need a window containing a finite group".into()));
    }
    let names = (0..n).map(|g| window.name(g)).collect();
    let space = FiniteMetricSpace::new(names, |x, y| q::int(window.dist(x, y) as i64))?;
    let action = PartialAction::from_fn(n, n, |g, x| window.mul(g, x));
    CompactificationModel::new(window.clone(), space, vec![false; n], action)
}

/// `F₂` acting on `Z/7` by `a: x ↦ x + 1`, `b: x ↦ 2x`, with the cyclic
/// metric.
pub fn free_on_z7_model(window: Arc<GroupWindow>) -> Result<CompactificationModel> {
    if *window.spec() != GroupSpec::free(2) {
        return Err(Error::Parameter("this model needs a window of F2".into()));
    }
    let letter = |l: i32, x: i64| -> i64 {
        match l {
            1 => (x + 1).rem_euclid(7),
            -1 => (x - 1).rem_euclid(7),
            2 => (2 * x).rem_euclid(7),
            -2 => (4 * x).rem_euclid(7),
            _ => unreachable!(),
        }
    };
    let names = (0..7).map(|x| x.to_string()).collect();
    let space = FiniteMetricSpace::new(names, |x, y| {
        let d = (x as i64 - y as i64).rem_euclid(7);
        q::int(d.min(7 - d))
    })?;
    let action = PartialAction::from_fn(window.len(), 7, |g, x| {
        let Elem::Word(wd) = window.elem(g) else { unreachable!() };
        Some(wd.iter().rev().fold(x as i64, |acc, &l| letter(l, acc)) as usize)
    });
    CompactificationModel::new(window.clone(), space, vec![false; 7], action)
}

/// The interval model with `S = {−1, 0, 1}` and generator maps that move
/// interior points by `±1`, occasionally perturbed by one more step, and
/// send `±R` to `±∞`. `H⁰ = φ_g ∘ φ_h`, `H¹ = φ_{gh}` and `samples` middle
/// times pick pointwise between the two ends.
pub fn perturbed_interval_homotopy(radius: u32, perturbations: usize, samples: usize, seed: u64) -> Result<HomotopyActionModel> {
    let w = Arc::new(GroupWindow::build(&GroupSpec::integers(), radius.max(1))?);
    let model = Arc::new(interval_compactification(w.clone())?);
    let n = model.len();
    let r = w.radius() as i64;
    let mut rg = rng(seed);
    let id = w.identity();
    let plus = w.lookup("1")?;
    let minus = w.lookup("-1")?;
    let clamp = |y: i64| -> u32 {
        if y > r {
            (n - 1) as u32
        } else if y < -r {
            0
        } else {
            (y + r + 1) as u32
        }
    };
    let mut step = |dir: i64| -> PMap {
        let mut m: PMap = (0..n)
            .map(|x| {
                if x == 0 || x == n - 1 {
                    return Some(x as u32);
                }
                Some(clamp(x as i64 - 1 - r + dir))
            })
            .collect();
        for _ in 0..perturbations {
            let x = rg.gen_range(1..n - 1);
            let y = x as i64 - 1 - r + dir + rg.gen_range(-1..=1);
            m[x] = Some(clamp(y));
        }
        m
    };
    let mut phi = BTreeMap::new();
    phi.insert(id, (0..n).map(|x| Some(x as u32)).collect::<PMap>());
    phi.insert(plus, step(1));
    phi.insert(minus, step(-1));
    let s = vec![minus, id, plus];
    let compose = |f: &PMap, g: &PMap| -> PMap { g.iter().map(|y| y.and_then(|y| f[y as usize])).collect() };
    let mut grid = vec![q::zero()];
    for i in 1..=samples {
        grid.push(q::frac(i as i64, samples as i64 + 1));
    }
    grid.push(q::one());
    let mut h = BTreeMap::new();
    for &g in &s {
        for &k in &s {
            let Some(gk) = w.mul(g, k) else { continue };
            if !s.contains(&gk) {
                continue;
            }
            let start = compose(&phi[&g], &phi[&k]);
            let end = phi[&gk].clone();
            let mut maps = vec![start.clone()];
            for _ in 0..samples {
                if g == id && k == id {
                    maps.push(end.clone());
                    continue;
                }
                maps.push((0..n).map(|x| if rg.gen_bool(0.5) { start[x] } else { end[x] }).collect());
            }
            maps.push(end);
            h.insert((g, k), maps);
        }
    }
    HomotopyActionModel::new(model, s, phi, h, grid)
}

/// A finite group acting on a union of coset spaces `H/⟨k⟩` with an
/// invariant metric: random weights on orbits of pairs, closed under
/// shortest paths.
pub fn random_coset_space(window: Arc<GroupWindow>, orbits: usize, max_points: usize, seed: u64) -> Result<CompactificationModel> {
    let n = window.len();
    if !window.group().is_finite() || window.group().finite_diameter().is_none_or(|d| window.radius() < d) {
        return Err(Error::Parameter("coset spaces need a window containing a finite group".into()));
    }
    let mut r = rng(seed);
    // points are left cosets g⟨k⟩, one orbit per chosen k
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    let mut orbit_of: Vec<usize> = Vec::new();
    for o in 0..orbits.max(1) {
        let k = r.gen_range(0..n);
        let mut sub = vec![window.identity()];
        let mut p = k;
        while p != window.identity() {
            sub.push(p);
            p = window.mul(p, k).expect("finite window");
        }
        let mut orbit: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            let mut c: Vec<usize> = sub.iter().map(|&s| window.mul(g, s).unwrap()).collect();
            c.sort_unstable();
            if !orbit.contains(&c) {
                orbit.push(c);
            }
        }
        if cosets.len() + orbit.len() > max_points {
            continue;
        }
        orbit_of.extend(std::iter::repeat_n(o, orbit.len()));
        cosets.extend(orbit);
    }
    if cosets.is_empty() {
        return Err(Error::Parameter("no orbit fits under the point cap".into()));
    }
    let m = cosets.len();
    let act = |g: usize, x: usize| -> usize {
        let mut c: Vec<usize> = cosets[x].iter().map(|&h| window.mul(g, h).unwrap()).collect();
        c.sort_unstable();
        (0..m).find(|&y| orbit_of[y] == orbit_of[x] && cosets[y] == c).expect("orbit is closed")
    };
    let mut weight: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut d = vec![vec![0i64; m]; m];
    for x in 0..m {
        for y in x + 1..m {
            let key = (0..n)
                .map(|g| {
                    let (a, b) = (act(g, x), act(g, y));
                    (a.min(b), a.max(b))
                })
                .min()
                .unwrap();
            let wgt = *weight.entry(key).or_insert_with(|| r.gen_range(1..=5));
            d[x][y] = wgt;
            d[y][x] = wgt;
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let names = (0..m).map(|x| format!("y{x}")).collect();
    let space = FiniteMetricSpace::new(names, |x, y| q::int(d[x][y]))?;
    let action = PartialAction::from_fn(n, m, |g, x| Some(act(g, x)));
    CompactificationModel::new(window, space, vec![false; m], action)
}

/// An equivariant family of subsets of the points whose translates are equal
/// or disjoint: `seeds` sets grown from random points, all their
/// translates, and singleton orbits for whatever is left uncovered.
pub fn random_equivariant_family(model: &CompactificationModel, seeds: usize, growth: usize, seed: u64) -> Vec<Vec<usize>> {
    let w = &model.window;
    let m = model.len();
    let mut r = rng(seed);
    let image = |g: usize, set: &BTreeSet<usize>| -> Option<BTreeSet<usize>> { set.iter().map(|&y| model.action.apply(g, y)).collect() };
    let orbit_ok = |set: &BTreeSet<usize>| -> bool {
        (0..w.len()).all(|g| match image(g, set) {
            Some(img) => img == *set || img.is_disjoint(set),
            None => false,
        })
    };
    let mut bases: Vec<BTreeSet<usize>> = Vec::new();
    for _ in 0..seeds {
        let mut a = BTreeSet::from([r.gen_range(0..m)]);
        for _ in 0..growth {
            let stab: Vec<usize> = (0..w.len()).filter(|&g| image(g, &a).as_ref() == Some(&a)).collect();
            let z = r.gen_range(0..m);
            let mut b = a.clone();
            b.extend(stab.iter().filter_map(|&g| model.action.apply(g, z)));
            if orbit_ok(&b) {
                a = b;
            }
        }
        bases.push(a);
    }
    let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in &bases {
        for g in 0..w.len() {
            if let Some(img) = image(g, a) {
                family.insert(img.into_iter().collect());
            }
        }
    }
    let covered: BTreeSet<usize> = family.iter().flatten().copied().collect();
    for x in 0..m {
        if !covered.contains(&x) {
            for g in 0..w.len() {
                if let Some(y) = model.action.apply(g, x) {
                    family.insert(vec![y]);
                }
            }
        }
    }
    family.into_iter().collect()
}
