use crate::error::{Error, Result};
use crate::group::GroupWindow;
use crate::q::{self, Q};
use crate::space::FiniteMetricSpace;

/// For each window element `g`, a partial map on points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAction {
    maps: Vec<Vec<Option<u32>>>,
}

/// Coverage statistics of a law check over the defined part of an action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    pub defined: usize,
    pub total: usize,
    pub checked_triples: usize,
}

impl ActionReport {
    pub fn coverage(&self) -> Q {
        if self.total == 0 {
            return q::one();
        }
        q::frac(self.defined as i64, self.total as i64)
    }
}

impl PartialAction {
    pub fn from_fn(group_size: usize, points: usize, f: impl Fn(usize, usize) -> Option<usize>) -> Self {
        let maps = (0..group_size)
            .map(|g| (0..points).map(|x| f(g, x).map(|y| y as u32)).collect())
            .collect();
        PartialAction { maps }
    }

    /// The trivial action: every element fixes every point.
    pub fn trivial(group_size: usize, points: usize) -> Self {
        Self::from_fn(group_size, points, |_, x| Some(x))
    }

    pub fn group_size(&self) -> usize {
        self.maps.len()
    }

    pub fn points(&self) -> usize {
        self.maps.first().map_or(0, Vec::len)
    }

    pub fn apply(&self, g: usize, x: usize) -> Option<usize> {
        self.maps[g][x].map(|y| y as usize)
    }

    pub fn map_of(&self, g: usize) -> &[Option<u32>] {
        &self.maps[g]
    }

    /// True when `g` is defined on every point.
    pub fn is_total_for(&self, g: usize) -> bool {
        self.maps[g].iter().all(Option::is_some)
    }

    /// Checks `1·x = x` and `(gh)·x = g·(h·x)` on every triple where all
    /// three applications and the product are defined.
    pub fn check_laws(&self, w: &GroupWindow) -> Result<ActionReport> {
        if self.maps.len() != w.len() {
            return Err(Error::ActionLaw("action table size differs from the window".into()));
        }
        let n = self.points();
        let id = w.identity();
        for x in 0..n {
            if self.apply(id, x) != Some(x) {
                return Err(Error::ActionLaw(format!("identity moves point {x}")));
            }
        }
        let mut checked = 0;
        for g in 0..w.len() {
            for h in 0..w.len() {
                let Some(gh) = w.mul(g, h) else { continue };
                for x in 0..n {
                    let (Some(hx), Some(ghx)) = (self.apply(h, x), self.apply(gh, x)) else {
                        continue;
                    };
                    let Some(g_hx) = self.apply(g, hx) else { continue };
                    checked += 1;
                    if g_hx != ghx {
                        return Err(Error::ActionLaw(format!(
                            "({})·{x} = {ghx} but {}·({}·{x}) = {g_hx}",
                            w.name(gh),
                            w.name(g),
                            w.name(h)
                        )));
                    }
                }
            }
        }
        let defined = self.maps.iter().flatten().filter(|v| v.is_some()).count();
        Ok(ActionReport {
            defined,
            total: w.len() * n,
            checked_triples: checked,
        })
    }

    /// Checks `d(gx, gy) = d(x, y)` wherever both sides are defined.
    pub fn check_isometry(&self, w: &GroupWindow, space: &FiniteMetricSpace) -> Result<()> {
        for g in 0..self.group_size() {
            for x in 0..space.len() {
                let Some(gx) = self.apply(g, x) else { continue };
                for y in x + 1..space.len() {
                    let Some(gy) = self.apply(g, y) else { continue };
                    if space.dist(gx, gy) != space.dist(x, y) {
                        return Err(Error::NotIsometric(format!(
                            "{} changes d({}, {})",
                            w.name(g),
                            space.name(x),
                            space.name(y)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that every defined application maps the marked subset into
    /// itself and its complement into the complement.
    pub fn check_preserves(&self, marked: &[bool]) -> Result<()> {
        for (g, m) in self.maps.iter().enumerate() {
            for (x, y) in m.iter().enumerate() {
                if let Some(y) = y {
                    if marked[x] != marked[*y as usize] {
                        return Err(Error::ActionLaw(format!(
                            "element {g} moves point {x} across the boundary"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
