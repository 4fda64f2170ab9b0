use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::characterisations::{nerve, EquivariantMap};
use crate::covers::{family_dimension, lebesgue_check, shrink, CoverFamily, Subset};
use crate::error::{Error, Result};
use crate::q::{self, Q};
use crate::space::L1Point;

/// Partition of unity subordinate to the shrunken members `I(U) = B(U, −k)`.
#[derive(Clone, Debug)]
pub enum Weights {
    /// `w_U(h, x) = [(h, x) ∈ I(U)] / #{V : (h, x) ∈ I(V)}`.
    Auto,
    /// Explicit weights, one row per member, indexed by ground point.
    Table(Vec<Vec<Q>>),
}

#[derive(Clone, Debug)]
pub struct PartitionLu {
    pub map: EquivariantMap,
    /// Nonzero `l_U(g, x)` per ground point of the domain, as `(U, value)`.
    pub values: Vec<Option<Vec<(usize, Q)>>>,
    pub k: usize,
    pub n: isize,
    /// `max |l_U(g, x) − l_U(gs, x)|` over generators.
    pub g_lipschitz: Q,
    /// `max ‖φ(g, x) − φ(gs, x)‖₁` over generators.
    pub measured: Q,
    /// `3(n + 1)²/k`.
    pub bound: Q,
    /// Every positive `l_U` lies inside `U`.
    pub support_ok: bool,
}

impl PartitionLu {
    pub fn l(&self, u: usize, p: usize) -> Option<Q> {
        let vals = self.values[p].as_ref()?;
        Some(vals.iter().find(|(v, _)| *v == u).map_or_else(Q::zero, |(_, l)| *l))
    }
}

/// `l_U(g, x) = max_h (k·w_U(h, x) − d(g, h))` over `d(g, h) ≤ k`, on the
/// inner window of `2k` where every such `h` has exact weights.
pub fn partition_lu(cover: &CoverFamily, k: usize, weights: &Weights) -> Result<PartitionLu> {
    if cover.is_empty() {
        return Err(Error::EmptyCover);
    }
    let ground = cover.ground.clone();
    let w = ground.window();
    let kq = q::int(k as i64);
    let leb = lebesgue_check(cover, &kq)?;
    if !leb.passed {
        return Err(Error::Lebesgue(format!(
            "G-Lebesgue number {k} fails at {}",
            ground.name(leb.witness.unwrap_or(0))
        )));
    }
    let shrunk: Vec<Subset> = cover
        .members()
        .iter()
        .map(|u| shrink(&ground, u, &kq).map(|p| p.set))
        .collect::<Result<_>>()?;
    let inner_k = w.inner_window(&kq);
    let weight_rows: Vec<Vec<Q>> = match weights {
        Weights::Auto => {
            let mut rows = vec![vec![Q::zero(); ground.size()]; cover.len()];
            for &g in &inner_k {
                for x in 0..ground.points() {
                    let p = ground.idx(g, x);
                    let c = shrunk.iter().filter(|s| s.contains(p)).count();
                    if c == 0 {
                        return Err(Error::Weights(format!("{} lies in no shrunken member", ground.name(p))));
                    }
                    for (u, s) in shrunk.iter().enumerate() {
                        if s.contains(p) {
                            rows[u][p] = q::frac(1, c as i64);
                        }
                    }
                }
            }
            rows
        }
        Weights::Table(rows) => {
            if rows.len() != cover.len() || rows.iter().any(|r| r.len() != ground.size()) {
                return Err(Error::Weights("weight table has the wrong shape".into()));
            }
            for &g in &inner_k {
                for x in 0..ground.points() {
                    let p = ground.idx(g, x);
                    let mut total = Q::zero();
                    for (u, row) in rows.iter().enumerate() {
                        if row[p].is_negative() || (!row[p].is_zero() && !shrunk[u].contains(p)) {
                            return Err(Error::Weights(format!("member {u} at {}", ground.name(p))));
                        }
                        total += row[p];
                    }
                    if total != q::one() {
                        return Err(Error::Weights(format!("weights at {} sum to {}", ground.name(p), q::fmt(&total))));
                    }
                }
            }
            rows.clone()
        }
    };
    let Some(rho) = w.inner_radius(&q::int(2 * k as i64)) else {
        return Err(Error::Parameter(format!("inner window of {} is empty", 2 * k)));
    };
    let domain: Vec<usize> = (0..w.len()).take_while(|&g| w.word_length(g) <= rho).collect();
    let mut values: Vec<Option<Vec<(usize, Q)>>> = vec![None; ground.size()];
    let mut table = vec![None; ground.size()];
    let mut support_ok = true;
    for &g in &domain {
        let ball: Vec<(usize, Q)> = w.closed_ball(g, k as u32).into_iter().map(|h| (h, q::int(w.dist(g, h) as i64))).collect();
        for x in 0..ground.points() {
            let p = ground.idx(g, x);
            let mut ls = Vec::new();
            for (u, row) in weight_rows.iter().enumerate() {
                let l = ball
                    .iter()
                    .map(|(h, d)| kq * row[ground.idx(*h, x)] - d)
                    .max()
                    .expect("ball contains its center");
                if l.is_positive() {
                    support_ok &= cover.member(u).contains(p);
                    ls.push((u, l));
                }
            }
            let point = L1Point::from_pairs(ls.iter().cloned())?
                .normalized()
                .ok_or_else(|| Error::Weights(format!("all l_U vanish at {}", ground.name(p))))?;
            table[p] = Some(point);
            values[p] = Some(ls);
        }
    }
    let mut g_lipschitz = Q::zero();
    for &g in &domain {
        for j in 0..w.generators().len() {
            let Some(gs) = w.step(g, j) else { continue };
            if w.word_length(gs) > rho {
                continue;
            }
            for x in 0..ground.points() {
                let (a, b) = (ground.idx(g, x), ground.idx(gs, x));
                let (va, vb) = (values[a].as_ref().unwrap(), values[b].as_ref().unwrap());
                for u in 0..cover.len() {
                    let la = va.iter().find(|e| e.0 == u).map_or_else(Q::zero, |e| e.1);
                    let lb = vb.iter().find(|e| e.0 == u).map_or_else(Q::zero, |e| e.1);
                    g_lipschitz = g_lipschitz.max((la - lb).abs());
                }
            }
        }
    }
    let map = EquivariantMap {
        ground: ground.clone(),
        complex: Arc::new(nerve(cover)?),
        domain_radius: rho,
        table,
    };
    let measured = map.g_direction_lipschitz();
    let n = family_dimension(cover);
    Ok(PartitionLu {
        map,
        values,
        k,
        n,
        g_lipschitz,
        measured,
        bound: q::frac(3 * (n as i64 + 1) * (n as i64 + 1), k as i64),
        support_ok,
    })
}
