use crate::covers::{family_dimension, g_multiplicity, lebesgue_check, pad, shrink, CoverFamily, LebesgueReport};
use crate::error::{Error, Result};
use crate::q::{self, Q};

#[derive(Clone, Debug)]
pub struct MultiplicityCertificate {
    pub d: Q,
    pub dimension: isize,
    /// `(G, d)`-multiplicity of `ℐ`.
    pub multiplicity: usize,
    /// `ℐ` covers `inner(d) × X̄`.
    pub covers_inner: bool,
    pub inner_radius: u32,
}

/// `ℐ = {B(U, −d)}` without its empty sets; requires the G-Lebesgue number
/// `d`.
pub fn cover_to_multiplicity_cover(cover: &CoverFamily, d: &Q) -> Result<(CoverFamily, MultiplicityCertificate)> {
    if cover.is_empty() {
        return Err(Error::EmptyCover);
    }
    let leb = lebesgue_check(cover, d)?;
    if !leb.passed {
        return Err(Error::Lebesgue(format!(
            "no member contains the {}-ball at {}",
            q::fmt(d),
            cover.ground.name(leb.witness.unwrap_or(0))
        )));
    }
    let members = cover
        .members()
        .iter()
        .map(|u| shrink(&cover.ground, u, d).map(|p| p.set))
        .filter(|s| s.as_ref().map_or(true, |s| !s.is_clear()))
        .collect::<Result<Vec<_>>>()?;
    let i = CoverFamily::new(cover.ground.clone(), members)?;
    let ground = &cover.ground;
    let union = i.union();
    let covers_inner = ground
        .window()
        .inner_window(d)
        .into_iter()
        .all(|g| (0..ground.points()).all(|x| union.contains(ground.idx(g, x))));
    let mult = g_multiplicity(&i, d)?;
    Ok((
        i,
        MultiplicityCertificate {
            d: *d,
            dimension: family_dimension(cover),
            multiplicity: mult.value,
            covers_inner,
            inner_radius: leb.inner_radius,
        },
    ))
}

#[derive(Clone, Debug)]
pub struct PaddedCertificate {
    pub alpha: Q,
    pub dimension: isize,
    pub lebesgue: LebesgueReport,
    /// Stabilizers of `B(V, α)` permute at most this many translates of `V`.
    pub index_bound: usize,
}

/// `𝒰 = {B(V, α)}`; requires `(G, α)`-multiplicity at most `n + 1` and that
/// `ℐ` covers the inner window of `α`.
pub fn multiplicity_to_lebesgue_cover(i: &CoverFamily, alpha: &Q, n: usize) -> Result<(CoverFamily, PaddedCertificate)> {
    if i.is_empty() {
        return Err(Error::EmptyCover);
    }
    let mult = g_multiplicity(i, alpha)?;
    if mult.value > n + 1 {
        return Err(Error::Multiplicity(format!(
            "(G, {})-multiplicity {} exceeds {} at {}",
            q::fmt(alpha),
            mult.value,
            n + 1,
            i.ground.name(mult.witness.unwrap_or(0))
        )));
    }
    let ground = &i.ground;
    let union = i.union();
    for g in ground.window().inner_window(alpha) {
        for x in 0..ground.points() {
            if !union.contains(ground.idx(g, x)) {
                return Err(Error::CoverageGap(ground.name(ground.idx(g, x))));
            }
        }
    }
    let members = i
        .members()
        .iter()
        .filter(|v| !v.is_clear())
        .map(|v| pad(ground, v, alpha).map(|p| p.set))
        .collect::<Result<Vec<_>>>()?;
    let u = CoverFamily::new(ground.clone(), members)?;
    let lebesgue = lebesgue_check(&u, alpha)?;
    Ok((
        u.clone(),
        PaddedCertificate {
            alpha: *alpha,
            dimension: family_dimension(&u),
            lebesgue,
            index_bound: n + 1,
        },
    ))
}
