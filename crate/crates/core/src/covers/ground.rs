use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupWindow;
use crate::space::CompactificationModel;

pub type Subset = FixedBitSet;

pub const DEFAULT_GROUND_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundAction {
    /// `h(g, x) = (hg, hx)`.
    Diagonal,
    /// `h(g, x) = (hg, x)`.
    Translation,
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroundAction::Diagonal => "diagonal",
            GroundAction::Translation => "translation",
        })
    }
}

/// `Window × Points`, indexed as `g * m + x`.
#[derive(Clone, Debug)]
pub struct Ground {
    pub model: Arc<CompactificationModel>,
    pub action: GroundAction,
}

impl Ground {
    pub fn new(model: Arc<CompactificationModel>, action: GroundAction, cap: usize) -> Result<Self> {
        let size = model.window.len() * model.len();
        if size > cap {
            return Err(Error::SizeCap { cap });
        }
        Ok(Ground { model, action })
    }

    pub fn window(&self) -> &GroupWindow {
        &self.model.window
    }

    pub fn points(&self) -> usize {
        self.model.len()
    }

    pub fn size(&self) -> usize {
        self.window().len() * self.points()
    }

    pub fn idx(&self, g: usize, x: usize) -> usize {
        g * self.points() + x
    }

    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.points(), i % self.points())
    }

    pub fn name(&self, i: usize) -> String {
        let (g, x) = self.split(i);
        format!("({}, {})", self.window().name(g), self.model.space.name(x))
    }

    /// `h·(g, x)` when defined inside the window.
    pub fn act(&self, h: usize, i: usize) -> Option<usize> {
        let (g, x) = self.split(i);
        let hg = self.window().mul(h, g)?;
        let hx = match self.action {
            GroundAction::Diagonal => self.model.action.apply(h, x)?,
            GroundAction::Translation => x,
        };
        Some(self.idx(hg, hx))
    }

    pub fn empty_set(&self) -> Subset {
        FixedBitSet::with_capacity(self.size())
    }

    pub fn full_set(&self) -> Subset {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// `S × F` for window elements `S` and points `F`.
    pub fn product(&self, elems: impl IntoIterator<Item = usize> + Clone, points: &[usize]) -> Subset {
        let mut s = self.empty_set();
        for g in elems {
            for &x in points {
                s.insert(self.idx(g, x));
            }
        }
        s
    }

    /// Image `h·U` of the part of `U` on which `h` is defined.
    pub fn translate(&self, h: usize, u: &Subset) -> Subset {
        let mut out = self.empty_set();
        for p in u.ones() {
            if let Some(q) = self.act(h, p) {
                out.insert(q);
            }
        }
        out
    }
}

/// An indexed family of subsets of a ground set.
#[derive(Clone, Debug)]
pub struct CoverFamily {
    pub ground: Arc<Ground>,
    members: Vec<Subset>,
}

impl CoverFamily {
    /// Rejects empty members and members of the wrong size.
    pub fn new(ground: Arc<Ground>, members: Vec<Subset>) -> Result<Self> {
        if members.iter().any(|m| m.is_clear()) {
            return Err(Error::InvalidSpec("cover has an empty member".into()));
        }
        Self::new_allow_empty(ground, members)
    }

    pub fn new_allow_empty(ground: Arc<Ground>, members: Vec<Subset>) -> Result<Self> {
        let n = ground.size();
        if members.iter().any(|m| m.len() != n) {
            return Err(Error::InvalidSpec("member does not match the ground set".into()));
        }
        Ok(CoverFamily { ground, members })
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Subset {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self) -> Subset {
        let mut u = self.ground.empty_set();
        for m in &self.members {
            u.union_with(m);
        }
        u
    }

    /// For each ground point, the members that contain it.
    pub fn incidence(&self) -> Vec<Vec<u32>> {
        let mut inc = vec![Vec::new(); self.ground.size()];
        for (i, m) in self.members.iter().enumerate() {
            for p in m.ones() {
                inc[p].push(i as u32);
            }
        }
        inc
    }

    /// Members kept in index order.
    pub fn select(&self, idx: &[usize]) -> CoverFamily {
        CoverFamily {
            ground: self.ground.clone(),
            members: idx.iter().map(|&i| self.members[i].clone()).collect(),
        }
    }

    pub fn concat(&self, other: &CoverFamily) -> CoverFamily {
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        CoverFamily {
            ground: self.ground.clone(),
            members,
        }
    }
}
