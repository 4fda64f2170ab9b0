use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::{Elem, Group, GroupSpec};
use crate::q::{self, Q};

pub const DEFAULT_WINDOW_CAP: usize = 1_000_000;

/// Full multiplication tables are cached below this many elements.
const MUL_TABLE_LIMIT: usize = 2048;

#[derive(Clone, Copy, Debug)]
pub struct WindowOptions {
    pub cap: usize,
}

impl Default for WindowOptions {
    fn default() -> Self {
        WindowOptions { cap: DEFAULT_WINDOW_CAP }
    }
}

/// An open ball of a window together with its clipping flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: usize,
    /// Element indices, sorted.
    pub members: Vec<usize>,
    /// Set when the ball in the whole group may reach outside the window.
    pub clipped: bool,
}

/// The ball of radius `R` around the identity in the word metric.
///
/// Elements are indexed in order of (word length, normal form), so index 0
/// is always the identity.
#[derive(Clone, Debug)]
pub struct GroupWindow {
    group: Group,
    radius: u32,
    elems: Vec<Elem>,
    index: HashMap<Elem, usize>,
    lengths: Vec<u32>,
    inverse: Vec<usize>,
    gens: Vec<Elem>,
    /// `right[g][s]` is `g·s` when it lies in the window.
    right: Vec<Vec<Option<usize>>>,
    mul: Option<Vec<Vec<Option<u32>>>>,
    convex: bool,
}

impl GroupWindow {
    pub fn build(spec: &GroupSpec, radius: u32) -> Result<Self> {
        Self::build_with(spec, radius, WindowOptions::default())
    }

    pub fn build_with(spec: &GroupSpec, radius: u32, opts: WindowOptions) -> Result<Self> {
        let group = Group::new(spec.clone())?;
        let gens = group.generators();
        let mut seen: HashMap<Elem, u32> = HashMap::new();
        let id = group.identity();
        seen.insert(id.clone(), 0);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            let l = seen[&g];
            if l == radius {
                continue;
            }
            for s in &gens {
                let h = group.mul(&g, s);
                if !seen.contains_key(&h) {
                    if seen.len() >= opts.cap {
                        return Err(Error::SizeCap { cap: opts.cap });
                    }
                    seen.insert(h.clone(), l + 1);
                    queue.push_back(h);
                }
            }
        }
        let mut elems: Vec<(u32, Elem)> = seen.into_iter().map(|(e, l)| (l, e)).collect();
        elems.sort();
        let lengths: Vec<u32> = elems.iter().map(|(l, _)| *l).collect();
        let elems: Vec<Elem> = elems.into_iter().map(|(_, e)| e).collect();
        let index: HashMap<Elem, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let inverse = elems.iter().map(|e| index[&group.inv(e)]).collect();
        let right = elems
            .iter()
            .map(|g| gens.iter().map(|s| index.get(&group.mul(g, s)).copied()).collect())
            .collect();
        let mul = (elems.len() <= MUL_TABLE_LIMIT).then(|| {
            elems
                .iter()
                .map(|g| {
                    elems
                        .iter()
                        .map(|h| index.get(&group.mul(g, h)).map(|&i| i as u32))
                        .collect()
                })
                .collect()
        });
        let convex = group.balls_are_convex() || group.finite_diameter().is_some_and(|d| radius >= d);
        Ok(GroupWindow {
            group,
            radius,
            elems,
            index,
            lengths,
            inverse,
            gens,
            right,
            mul,
            convex,
        })
    }

    /// The window of a smaller radius over the same group.
    pub fn sub_window(&self, radius: u32) -> Result<Self> {
        if radius > self.radius {
            return Err(Error::Parameter(format!(
                "sub-window radius {radius} exceeds window radius {}",
                self.radius
            )));
        }
        Self::build(self.group.spec(), radius)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn spec(&self) -> &GroupSpec {
        self.group.spec()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elem(&self, i: usize) -> &Elem {
        &self.elems[i]
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elems
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn lookup(&self, normal_form: &str) -> Result<usize> {
        let e = self.group.parse(normal_form)?;
        self.index_of(&e)
            .ok_or_else(|| Error::NotInWindow(normal_form.to_string()))
    }

    pub fn name(&self, i: usize) -> String {
        self.group.normal_form(&self.elems[i])
    }

    pub fn word_length(&self, i: usize) -> u32 {
        self.lengths[i]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Generators (symmetric, identity excluded) in canonical order.
    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    pub fn generator_indices(&self) -> Vec<usize> {
        self.gens.iter().map(|s| self.index[s]).collect()
    }

    /// `g·s` for the `j`-th generator.
    pub fn step(&self, g: usize, j: usize) -> Option<usize> {
        self.right[g][j]
    }

    /// Partial multiplication: defined when the product lies in the window.
    pub fn mul(&self, g: usize, h: usize) -> Option<usize> {
        match &self.mul {
            Some(t) => t[g][h].map(|v| v as usize),
            None => self.index_of(&self.group.mul(&self.elems[g], &self.elems[h])),
        }
    }

    /// Word-metric distance between two window elements (always exact).
    pub fn dist(&self, g: usize, h: usize) -> u32 {
        if let Some(gh) = self.mul(self.inverse[g], h) {
            return self.lengths[gh];
        }
        self.group.dist(&self.elems[g], &self.elems[h])
    }

    /// `true` if every ball of the window is computed by breadth-first
    /// search through the window (geodesics between window elements stay in
    /// the window).
    pub fn is_convex(&self) -> bool {
        self.convex
    }

    /// Open ball `{h : d(g,h) < α}` intersected with the window.
    pub fn ball(&self, g: usize, alpha: &Q) -> Result<Ball> {
        if *alpha <= q::zero() {
            return Err(Error::Parameter("ball radius must be positive".into()));
        }
        let r = q::open_radius(alpha);
        let r = if r > self.radius as i64 * 2 { self.radius * 2 } else { r as u32 };
        Ok(Ball {
            center: g,
            members: self.closed_ball(g, r),
            clipped: self.lengths[g] + r > self.radius,
        })
    }

    /// `{h : d(g,h) ≤ r}` intersected with the window, sorted.
    pub fn closed_ball(&self, g: usize, r: u32) -> Vec<usize> {
        if self.convex {
            let mut depth: HashMap<usize, u32> = HashMap::from([(g, 0)]);
            let mut queue = VecDeque::from([g]);
            while let Some(x) = queue.pop_front() {
                let dx = depth[&x];
                if dx == r {
                    continue;
                }
                for y in self.right[x].iter().flatten() {
                    if !depth.contains_key(y) {
                        depth.insert(*y, dx + 1);
                        queue.push_back(*y);
                    }
                }
            }
            let mut v: Vec<usize> = depth.into_keys().collect();
            v.sort_unstable();
            v
        } else {
            (0..self.len()).filter(|&h| self.dist(g, h) <= r).collect()
        }
    }

    /// Largest integer radius `ρ` with `{g : |g| ≤ ρ}` equal to the inner
    /// window of `α`, or `None` when that window is empty.
    pub fn inner_radius(&self, alpha: &Q) -> Option<u32> {
        let v = (q::int(self.radius as i64 + 1) - alpha).floor().to_integer();
        (v >= 0).then_some(v as u32)
    }

    /// `{g : |g| + α ≤ R + 1}`; the elements whose open α-ball cannot leave
    /// the window.
    pub fn inner_window(&self, alpha: &Q) -> Vec<usize> {
        match self.inner_radius(alpha) {
            Some(rho) => (0..self.len()).take_while(|&g| self.lengths[g] <= rho).collect(),
            None => Vec::new(),
        }
    }

    /// The α used to model `α = ∞`: the window radius plus one.
    pub fn infinity(&self) -> Q {
        q::int(self.radius as i64 + 1)
    }
}
