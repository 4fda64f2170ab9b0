use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::covers::{family_dimension, CoverFamily, Ground, GroundAction, Subset};
use crate::error::{Error, Result};
use crate::homotopy::{n_long_check, n_long_check_within, HomotopyActionModel, NLongReport};
use crate::q::{self, Q};
use crate::space::{L1Point, SimplicialComplex, VertexAction};

/// A map `G × X̄ → K` on the translation ground set, defined for
/// `|g| ≤ domain_radius`.
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    pub ground: Arc<Ground>,
    pub complex: Arc<SimplicialComplex>,
    pub domain_radius: u32,
    /// Indexed by ground point; `None` outside the domain.
    pub table: Vec<Option<L1Point>>,
}

impl EquivariantMap {
    pub fn value(&self, g: usize, x: usize) -> Option<&L1Point> {
        self.table[self.ground.idx(g, x)].as_ref()
    }

    /// `max ‖φ(g, x) − φ(gs⁻¹, f_s(x))‖₁` over `s ∈ S`, `f_s ∈ F_s` and pairs
    /// inside the domain, with the first maximizing `(g, x, s)`.
    pub fn antidiagonal_lipschitz(&self, ha: &HomotopyActionModel) -> (Q, Option<(usize, usize, usize)>) {
        let w = self.ground.window();
        let maps = ha.f_maps();
        let mut best = (Q::zero(), None);
        for p in 0..self.table.len() {
            let Some(a) = &self.table[p] else { continue };
            let (g, x) = self.ground.split(p);
            for &(s, f) in &maps {
                let Some(y) = f[x] else { continue };
                let Some(g2) = w.mul(g, w.inverse(s)) else { continue };
                let Some(b) = self.value(g2, y as usize) else { continue };
                let d = a.dist(b);
                if d > best.0 {
                    best = (d, Some((g, x, s)));
                }
            }
        }
        best
    }

    /// `max ‖φ(g, x) − φ(gs, x)‖₁` over generators `s`.
    pub fn g_direction_lipschitz(&self) -> Q {
        let w = self.ground.window();
        let mut best = Q::zero();
        for p in 0..self.table.len() {
            let Some(a) = &self.table[p] else { continue };
            let (g, x) = self.ground.split(p);
            for j in 0..w.generators().len() {
                let Some(gs) = w.step(g, j) else { continue };
                if let Some(b) = self.value(gs, x) {
                    best = best.max(a.dist(b));
                }
            }
        }
        best
    }

    /// `φ(hg, x) = h·φ(g, x)` for generators `h`, wherever the action on the
    /// complex and both values are defined. `None` without an action on K.
    pub fn is_equivariant(&self) -> Option<bool> {
        let action = self.complex.action()?;
        let w = self.ground.window();
        for h in w.generator_indices() {
            for p in 0..self.table.len() {
                let Some(a) = &self.table[p] else { continue };
                let Some(hp) = self.ground.act(h, p) else { continue };
                let Some(b) = &self.table[hp] else { continue };
                if let Some(ha) = a.translate(action, h) {
                    if ha != *b {
                        return Some(false);
                    }
                }
            }
        }
        Some(true)
    }

    /// Largest support size minus one over all values.
    pub fn image_dimension(&self) -> isize {
        self.table.iter().flatten().map(|p| p.support().len() as isize - 1).max().unwrap_or(-1)
    }

    /// The same map read in barycentric coordinates of `SK`.
    pub fn subdivide(&self) -> Result<EquivariantMap> {
        let sk = Arc::new(self.complex.barycentric_subdivision()?);
        let table = self
            .table
            .iter()
            .map(|p| p.as_ref().map(|p| p.to_subdivision(&self.complex)).transpose())
            .collect::<Result<_>>()?;
        Ok(EquivariantMap {
            ground: self.ground.clone(),
            complex: sk,
            domain_radius: self.domain_radius,
            table,
        })
    }
}

/// The nerve of a cover: one vertex per member, one simplex per set of
/// members with a common point. Window elements act by `U ↦ hU` wherever
/// `h` is defined on all of `U` and `hU` is again a member.
pub fn nerve(cover: &CoverFamily) -> Result<SimplicialComplex> {
    let names = (0..cover.len()).map(|i| format!("U{i}")).collect();
    let sets: BTreeSet<Vec<usize>> = cover
        .incidence()
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.into_iter().map(|u| u as usize).collect())
        .collect();
    let sets: Vec<Vec<usize>> = sets.into_iter().collect();
    let k = SimplicialComplex::from_maximal(names, &sets)?;
    let ground = &cover.ground;
    let index: HashMap<&Subset, usize> = cover.members().iter().enumerate().map(|(i, m)| (m, i)).rev().collect();
    let n = cover.len();
    let mut images = vec![None; ground.window().len() * n];
    for h in 0..ground.window().len() {
        for (i, m) in cover.members().iter().enumerate() {
            let hm = ground.translate(h, m);
            if hm.count_ones(..) == m.count_ones(..) {
                images[h * n + i] = index.get(&hm).copied();
            }
        }
    }
    k.with_action(VertexAction::from_fn(ground.window().len(), n, |h, i| images[h * n + i]))
}

#[derive(Clone, Debug)]
pub struct CoverToMap {
    pub map: EquivariantMap,
    pub n: isize,
    pub k: usize,
    pub measured: Q,
    /// `3(n + 1)/(k + 1)`.
    pub bound: Q,
    pub longness: NLongReport,
}

/// `l_U(g, x) = max{r ≤ k : ADB^r(g, x) ⊆ U}`, `Φ = Σ l_U·1_U`, `φ = Φ/‖Φ‖`,
/// defined on `|g| ≤ R − k` where `ADB^k` cannot leave the window.
pub fn cover_to_map(cover: &CoverFamily, ha: &HomotopyActionModel, k: usize) -> Result<CoverToMap> {
    if cover.is_empty() {
        return Err(Error::EmptyCover);
    }
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    let longness = n_long_check(cover, ha, k)?;
    if !longness.passed {
        let witness = match longness.witness {
            Some(p) => cover.ground.name(p),
            None => "clipped ADB set".into(),
        };
        return Err(Error::NotLong { k, witness });
    }
    let ground = cover.ground.clone();
    let w = ground.window();
    let rho = longness.inner_radius;
    let inc = cover.incidence();
    let mut table = vec![None; ground.size()];
    for g in (0..w.len()).take_while(|&g| w.word_length(g) <= rho) {
        for x in 0..ground.points() {
            let seed = ground.idx(g, x);
            let (levels, _) = ha.adb_levels(&ground, seed, k);
            let mut pairs = Vec::new();
            for &u in &inc[seed] {
                let m = cover.member(u as usize);
                let first_out = levels.iter().filter(|(p, _)| !m.contains(*p)).map(|&(_, d)| d).min();
                let l = match first_out {
                    Some(d) => (d as usize - 1).min(k),
                    None => k,
                };
                pairs.push((u as usize, q::int(l as i64)));
            }
            let phi = L1Point::from_pairs(pairs)?
                .normalized()
                .ok_or_else(|| Error::NotLong { k, witness: ground.name(seed) })?;
            table[seed] = Some(phi);
        }
    }
    let complex = Arc::new(nerve(cover)?);
    let map = EquivariantMap {
        ground,
        complex,
        domain_radius: rho,
        table,
    };
    let (measured, _) = map.antidiagonal_lipschitz(ha);
    let n = family_dimension(cover);
    Ok(CoverToMap {
        n,
        k,
        measured,
        bound: q::frac(3 * (n as i64 + 1), k as i64 + 1),
        longness,
        map,
    })
}

#[derive(Clone, Debug)]
pub struct DisjointFamilies {
    /// `families[i − 1]` holds the preimages of open stars of grade `i`.
    pub families: Vec<CoverFamily>,
    /// Subdivision vertex behind each member, per family.
    pub vertices: Vec<Vec<usize>>,
    pub subdivided: EquivariantMap,
    /// Antidiagonal constant of the map into `K`.
    pub measured: Q,
    /// Antidiagonal constant of the same map into `SK`.
    pub measured_subdivided: Q,
    /// `1/((n + 1)(r + 1))`.
    pub required: Q,
    /// `measured_subdivided ≤ required`, so the star estimate alone already
    /// gives r-longness; otherwise only the checker vouches for it.
    pub estimate_applies: bool,
    pub r: usize,
    pub longness: NLongReport,
}

impl DisjointFamilies {
    pub fn union(&self) -> CoverFamily {
        let mut it = self.families.iter();
        let first = it.next().expect("at least one family").clone();
        it.fold(first, |acc, f| acc.concat(f))
    }

    /// First `(family, i, j)` with two intersecting members of one family.
    pub fn overlap(&self) -> Option<(usize, usize, usize)> {
        for (f, fam) in self.families.iter().enumerate() {
            let ms = fam.members();
            for i in 0..ms.len() {
                for j in i + 1..ms.len() {
                    if !ms[i].is_disjoint(&ms[j]) {
                        return Some((f, i, j));
                    }
                }
            }
        }
        None
    }
}

/// Preimages of open stars of subdivision vertices, grouped by grade.
///
/// The precondition bounds the constant of `φ` itself. The star estimate
/// behind r-longness needs the bound for the map into `SK`, which can be
/// larger; both are reported and longness is checked directly.
pub fn map_to_disjoint_families(map: &EquivariantMap, ha: &HomotopyActionModel, n: usize, r: usize) -> Result<DisjointFamilies> {
    if map.image_dimension() > n as isize {
        return Err(Error::Precondition(format!(
            "map lands in a {}-dimensional part of K, not in an {n}-complex",
            map.image_dimension()
        )));
    }
    let (measured, _) = map.antidiagonal_lipschitz(ha);
    let sub = map.subdivide()?;
    let (measured_sk, _) = sub.antidiagonal_lipschitz(ha);
    let required = q::frac(1, ((n + 1) * (r + 1)) as i64);
    if measured > required {
        return Err(Error::LipschitzTooLarge {
            measured: q::fmt(&measured),
            required: q::fmt(&required),
        });
    }
    let ground = map.ground.clone();
    let sk = &sub.complex;
    let mut members: Vec<Vec<(usize, crate::covers::Subset)>> = vec![Vec::new(); n + 1];
    let mut by_vertex: Vec<Option<(usize, usize)>> = vec![None; sk.num_vertices()];
    for (p, value) in sub.table.iter().enumerate() {
        let Some(value) = value else { continue };
        for v in value.support() {
            let grade = sk.grade(v).expect("subdivision vertices carry a grade");
            let slot = match by_vertex[v] {
                Some(s) => s,
                None => {
                    members[grade - 1].push((v, ground.empty_set()));
                    let s = (grade - 1, members[grade - 1].len() - 1);
                    by_vertex[v] = Some(s);
                    s
                }
            };
            members[slot.0][slot.1].1.insert(p);
        }
    }
    let mut families = Vec::new();
    let mut vertices = Vec::new();
    for fam in members {
        let (vs, sets): (Vec<usize>, Vec<_>) = fam.into_iter().unzip();
        vertices.push(vs);
        families.push(CoverFamily::new(ground.clone(), sets)?);
    }
    let union = families.iter().skip(1).fold(families[0].clone(), |acc, f| acc.concat(f));
    let rho = map.domain_radius.checked_sub(r as u32).ok_or_else(|| {
        Error::Parameter(format!("r = {r} exceeds the map's domain radius {}", map.domain_radius))
    })?;
    let longness = n_long_check_within(&union, ha, r, rho)?;
    Ok(DisjointFamilies {
        families,
        vertices,
        subdivided: sub,
        measured,
        estimate_applies: measured_sk <= required,
        measured_subdivided: measured_sk,
        required,
        r,
        longness,
    })
}

/// `ψ : X̄ → K`.
#[derive(Clone, Debug)]
pub struct AlmostEquivariantMap {
    pub complex: Arc<SimplicialComplex>,
    pub table: Vec<L1Point>,
}

impl AlmostEquivariantMap {
    /// `max ‖ψ(f_s(x)) − s·ψ(x)‖₁` over `s ∈ S`, `f_s ∈ F_s`.
    pub fn defect(&self, ha: &HomotopyActionModel) -> Result<Q> {
        let action = self
            .complex
            .action()
            .ok_or_else(|| Error::ComplexAction("K carries no group action".into()))?;
        let w = ha.window();
        let mut best = Q::zero();
        for (s, f) in ha.f_maps() {
            for (x, y) in f.iter().enumerate() {
                let Some(y) = y else { continue };
                let sp = self.table[x]
                    .translate(action, s)
                    .ok_or_else(|| Error::ComplexAction(w.name(s)))?;
                best = best.max(self.table[*y as usize].dist(&sp));
            }
        }
        Ok(best)
    }
}

/// `φ(g, x) = g·ψ(x)` on the whole window; on the diagonal ground set this
/// reads `φ(g, x) = g·ψ(g⁻¹x)`.
pub fn psi_to_phi(psi: &AlmostEquivariantMap, ground: Arc<Ground>) -> Result<EquivariantMap> {
    let action = psi
        .complex
        .action()
        .ok_or_else(|| Error::ComplexAction("K carries no group action".into()))?;
    let w = ground.window();
    let model = &ground.model;
    let mut table = vec![None; ground.size()];
    for g in 0..w.len() {
        for x in 0..ground.points() {
            let base = match ground.action {
                GroundAction::Translation => x,
                GroundAction::Diagonal => model
                    .action
                    .apply(w.inverse(g), x)
                    .ok_or_else(|| Error::InsufficientDomain(format!("{} at {}", w.name(w.inverse(g)), model.space.name(x))))?,
            };
            let v = psi.table[base]
                .translate(action, g)
                .ok_or_else(|| Error::ComplexAction(format!("{} on ψ({})", w.name(g), ground.model.space.name(x))))?;
            table[ground.idx(g, x)] = Some(v);
        }
    }
    let domain_radius = w.radius();
    Ok(EquivariantMap {
        ground,
        complex: psi.complex.clone(),
        domain_radius,
        table,
    })
}

/// `ψ(x) = φ(1, x)`.
pub fn phi_to_psi(phi: &EquivariantMap) -> Result<AlmostEquivariantMap> {
    let id = phi.ground.window().identity();
    let table = (0..phi.ground.points())
        .map(|x| {
            phi.value(id, x)
                .cloned()
                .ok_or_else(|| Error::Precondition("φ is undefined at the identity".into()))
        })
        .collect::<Result<_>>()?;
    Ok(AlmostEquivariantMap {
        complex: phi.complex.clone(),
        table,
    })
}
