use crate::covers::{CoverFamily, FamilyPredicate, Ground, Subset};
use crate::error::{Error, Result};
use crate::q::{self, Q};

/// `max_p #{U ∋ p} − 1`, and `−1` for the empty family.
pub fn family_dimension(cover: &CoverFamily) -> isize {
    if cover.is_empty() {
        return -1;
    }
    let mut count = vec![0u32; cover.ground.size()];
    for m in cover.members() {
        for p in m.ones() {
            count[p] += 1;
        }
    }
    count.into_iter().max().unwrap_or(0) as isize - 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LebesgueReport {
    pub alpha: Q,
    pub passed: bool,
    /// First `(g, x)` (as a ground index) whose ball fits in no member.
    pub witness: Option<usize>,
    pub window_radius: u32,
    pub inner_radius: u32,
    pub checked: usize,
}

fn inner_or_err(ground: &Ground, alpha: &Q) -> Result<(u32, Vec<usize>)> {
    if *alpha <= q::zero() {
        return Err(Error::Parameter("radius must be positive".into()));
    }
    let w = ground.window();
    match w.inner_radius(alpha) {
        Some(rho) => Ok((rho, w.inner_window(alpha))),
        None => Err(Error::InsufficientDomain(format!(
            "inner window of {} is empty in a window of radius {}",
            q::fmt(alpha),
            w.radius()
        ))),
    }
}

/// Every `B(g, α) × {x}` with `g` in the inner window lies in a member.
pub fn lebesgue_check(cover: &CoverFamily, alpha: &Q) -> Result<LebesgueReport> {
    let ground = &cover.ground;
    let (rho, inner) = inner_or_err(ground, alpha)?;
    let w = ground.window();
    let r = q::open_radius(alpha) as u32;
    let inc = cover.incidence();
    let mut checked = 0;
    for g in inner {
        let ball = w.closed_ball(g, r);
        for x in 0..ground.points() {
            checked += 1;
            let fits = inc[ground.idx(g, x)].iter().any(|&u| {
                let m = cover.member(u as usize);
                ball.iter().all(|&h| m.contains(ground.idx(h, x)))
            });
            if !fits {
                return Ok(LebesgueReport {
                    alpha: *alpha,
                    passed: false,
                    witness: Some(ground.idx(g, x)),
                    window_radius: w.radius(),
                    inner_radius: rho,
                    checked,
                });
            }
        }
    }
    Ok(LebesgueReport {
        alpha: *alpha,
        passed: true,
        witness: None,
        window_radius: w.radius(),
        inner_radius: rho,
        checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FSubsetVerdict {
    Ok,
    /// `gU` meets `U` without being equal to it.
    OrbitOverlap { g: usize },
    StabilizerViolation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSubsetReport {
    pub verdict: FSubsetVerdict,
    /// Window elements `g` with `gU = U` on the region where both are
    /// determined. This is a window stabilizer, not the true one.
    pub stabilizer: Vec<usize>,
    /// Elements for which the comparison was non-vacuous.
    pub compared: usize,
    pub tested: usize,
}

/// Orbit condition and stabilizer predicate for member `i`.
///
/// `gU` and `U` are compared on the points `p` for which `g⁻¹p` is defined;
/// elements whose comparison region misses `U ∪ gU` are skipped and only
/// counted.
pub fn f_subset_check(cover: &CoverFamily, i: usize, family: &FamilyPredicate) -> Result<FSubsetReport> {
    let ground = &cover.ground;
    let w = ground.window();
    let u = cover.member(i);
    let mut stabilizer = Vec::new();
    let mut compared = 0;
    for h in 0..w.len() {
        let hinv = w.inverse(h);
        let mut meets = false;
        let mut differs = false;
        let mut seen = false;
        for p in u.ones() {
            if let Some(hp) = ground.act(h, p) {
                seen = true;
                if u.contains(hp) {
                    meets = true;
                } else {
                    differs = true;
                }
            }
            if let Some(back) = ground.act(hinv, p) {
                seen = true;
                if u.contains(back) {
                    meets = true;
                } else {
                    differs = true;
                }
            }
        }
        if !seen {
            continue;
        }
        compared += 1;
        if meets && differs {
            return Ok(FSubsetReport {
                verdict: FSubsetVerdict::OrbitOverlap { g: h },
                stabilizer,
                compared,
                tested: w.len(),
            });
        }
        if meets {
            stabilizer.push(h);
        }
    }
    if compared <= 1 && w.len() > 1 {
        return Err(Error::InsufficientDomain(format!(
            "no translate of member {i} could be compared inside the window"
        )));
    }
    let elems: Vec<_> = stabilizer.iter().map(|&g| w.elem(g).clone()).collect();
    let verdict = if family.contains(w.group(), &elems) {
        FSubsetVerdict::Ok
    } else {
        FSubsetVerdict::StabilizerViolation
    };
    Ok(FSubsetReport {
        verdict,
        stabilizer,
        compared,
        tested: w.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub d: Q,
    pub value: usize,
    pub witness: Option<usize>,
    pub inner_radius: u32,
}

/// `max #{U : U ∩ B(g, d) × {x} ≠ ∅}` over `g` in the inner window of `d`.
pub fn g_multiplicity(cover: &CoverFamily, d: &Q) -> Result<MultiplicityReport> {
    let ground = &cover.ground;
    let (rho, inner) = inner_or_err(ground, d)?;
    let w = ground.window();
    let r = q::open_radius(d) as u32;
    let inc = cover.incidence();
    let mut best = (0, None);
    let mut hit = vec![usize::MAX; cover.len()];
    let mut stamp = 0;
    for g in inner {
        let ball = w.closed_ball(g, r);
        for x in 0..ground.points() {
            stamp += 1;
            let mut count = 0;
            for &h in &ball {
                for &u in &inc[ground.idx(h, x)] {
                    if hit[u as usize] != stamp {
                        hit[u as usize] = stamp;
                        count += 1;
                    }
                }
            }
            if count > best.0 {
                best = (count, Some(ground.idx(g, x)));
            }
        }
    }
    Ok(MultiplicityReport {
        d: *d,
        value: best.0,
        witness: best.1,
        inner_radius: rho,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInfo {
    /// Partition of member indices, each orbit sorted, orbits by first index.
    pub orbits: Vec<Vec<usize>>,
    /// `(member, generator)` pairs whose translate matched no member.
    pub unmatched: Vec<(usize, usize)>,
    pub matched: usize,
}

/// Translates every member by every generator and looks for the member it
/// equals on the region where the translate is determined.
pub fn equivariance_check(cover: &CoverFamily) -> OrbitInfo {
    let ground = &cover.ground;
    let w = ground.window();
    let inc = cover.incidence();
    let mut parent: Vec<usize> = (0..cover.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    let mut unmatched = Vec::new();
    let mut matched = 0;
    for s in w.generator_indices() {
        let sinv = w.inverse(s);
        for (i, u) in cover.members().iter().enumerate() {
            let image = ground.translate(s, u);
            let Some(first) = image.ones().next() else { continue };
            let found = inc[first].iter().map(|&j| j as usize).find(|&j| {
                let v = cover.member(j);
                image.is_subset(v) && v.ones().all(|p| !defined_back(ground, s, sinv, p) || image.contains(p))
            });
            match found {
                Some(j) => {
                    matched += 1;
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
                None => unmatched.push((i, s)),
            }
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut root_pos = std::collections::HashMap::new();
    for i in 0..cover.len() {
        let r = find(&mut parent, i);
        let pos = *root_pos.entry(r).or_insert_with(|| {
            orbits.push(Vec::new());
            orbits.len() - 1
        });
        orbits[pos].push(i);
    }
    OrbitInfo {
        orbits,
        unmatched,
        matched,
    }
}

/// `p` lies in the image region of `s`: `s⁻¹p` is defined and maps back.
fn defined_back(ground: &Ground, s: usize, sinv: usize, p: usize) -> bool {
    ground.act(sinv, p).and_then(|b| ground.act(s, b)) == Some(p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundarySplit {
    /// Members missing `G × ∂X`.
    pub interior: Vec<usize>,
    /// Members meeting `G × ∂X`.
    pub boundary: Vec<usize>,
    pub dim: isize,
    pub dim_interior: isize,
    pub dim_boundary: isize,
}

impl BoundarySplit {
    pub fn bound_holds(&self) -> bool {
        self.dim <= self.dim_interior + self.dim_boundary + 1
    }
}

pub fn split_boundary_parts(cover: &CoverFamily) -> BoundarySplit {
    let ground = &cover.ground;
    let bd = &ground.model.boundary;
    let touches = |m: &Subset| m.ones().any(|p| bd[ground.split(p).1]);
    let (boundary, interior): (Vec<usize>, Vec<usize>) = (0..cover.len()).partition(|&i| touches(cover.member(i)));
    BoundarySplit {
        dim: family_dimension(cover),
        dim_interior: family_dimension(&cover.select(&interior)),
        dim_boundary: family_dimension(&cover.select(&boundary)),
        interior,
        boundary,
    }
}
