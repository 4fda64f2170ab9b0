use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::q::Q;
use crate::space::{SimplicialComplex, VertexAction};

/// A finitely supported nonnegative vector in `ℓ1(V(K))`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct L1Point {
    coords: BTreeMap<usize, Q>,
}

impl L1Point {
    pub fn vertex(v: usize) -> Self {
        L1Point {
            coords: BTreeMap::from([(v, Q::from_integer(1))]),
        }
    }

    /// Drops zero entries; rejects negative ones.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Q)>) -> Result<Self> {
        let mut coords = BTreeMap::new();
        for (v, c) in pairs {
            if c < Q::zero() {
                return Err(Error::Parameter("negative barycentric coordinate".into()));
            }
            if !c.is_zero() {
                *coords.entry(v).or_insert_with(Q::zero) += c;
            }
        }
        Ok(L1Point { coords })
    }

    pub fn coords(&self) -> &BTreeMap<usize, Q> {
        &self.coords
    }

    pub fn get(&self, v: usize) -> Q {
        self.coords.get(&v).copied().unwrap_or_else(Q::zero)
    }

    pub fn mass(&self) -> Q {
        self.coords.values().copied().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.coords.keys().copied().collect()
    }

    pub fn normalized(&self) -> Option<Self> {
        let m = self.mass();
        if m.is_zero() {
            return None;
        }
        Some(L1Point {
            coords: self.coords.iter().map(|(&v, &c)| (v, c / m)).collect(),
        })
    }

    pub fn dist(&self, other: &Self) -> Q {
        let mut total = Q::zero();
        for (v, c) in &self.coords {
            total += (*c - other.get(*v)).abs();
        }
        for (v, c) in &other.coords {
            if !self.coords.contains_key(v) {
                total += *c;
            }
        }
        total
    }

    /// `g·p`, pushing coordinates along the vertex map.
    pub fn translate(&self, action: &VertexAction, g: usize) -> Option<Self> {
        let pairs: Option<Vec<(usize, Q)>> = self.coords.iter().map(|(&v, &c)| action.apply(g, v).map(|u| (u, c))).collect();
        L1Point::from_pairs(pairs?).ok()
    }

    pub fn lies_in(&self, k: &SimplicialComplex) -> bool {
        k.is_simplex(&self.support())
    }

    /// Barycentric re-coordinates in the subdivision `sk` of `k`. With
    /// coordinates `p_(1) ≥ … ≥ p_(m)`, the chain vertex
    /// `{v_(1), …, v_(j)}` receives `j·(p_(j) − p_(j+1))`.
    pub fn to_subdivision(&self, k: &SimplicialComplex) -> Result<Self> {
        let mut sorted: Vec<(usize, Q)> = self.coords.iter().map(|(&v, &c)| (v, c)).collect();
        sorted.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut pairs = Vec::new();
        for j in 1..=sorted.len() {
            let next = sorted.get(j).map_or_else(Q::zero, |p| p.1);
            let w = Q::from_integer(j as i128) * (sorted[j - 1].1 - next);
            if w.is_zero() {
                continue;
            }
            let mut face: Vec<usize> = sorted[..j].iter().map(|p| p.0).collect();
            face.sort_unstable();
            let idx = k
                .simplex_index(&face)
                .ok_or_else(|| Error::Complex(format!("support {} is not a simplex", k.simplex_name(&face))))?;
            pairs.push((idx, w));
        }
        L1Point::from_pairs(pairs)
    }
}
