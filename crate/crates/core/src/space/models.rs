use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::group::{letter_char, Elem, GroupSpec, GroupWindow};
use crate::q::{self, Q};
use crate::space::{ActionReport, FiniteMetricSpace, PartialAction};

/// A finite metric space with a distinguished boundary and a partial action
/// of a group window.
#[derive(Clone, Debug)]
pub struct CompactificationModel {
    pub window: Arc<GroupWindow>,
    pub space: FiniteMetricSpace,
    pub boundary: Vec<bool>,
    pub action: PartialAction,
}

impl CompactificationModel {
    /// Validates the action laws and boundary preservation.
    pub fn new(
        window: Arc<GroupWindow>,
        space: FiniteMetricSpace,
        boundary: Vec<bool>,
        action: PartialAction,
    ) -> Result<Self> {
        if boundary.len() != space.len() || action.points() != space.len() {
            return Err(Error::InvalidSpec("space, boundary and action sizes differ".into()));
        }
        let m = CompactificationModel {
            window,
            space,
            boundary,
            action,
        };
        m.action.check_laws(&m.window)?;
        m.action.check_preserves(&m.boundary)?;
        Ok(m)
    }

    /// `n` points at mutual distance 1, each fixed by the whole window.
    pub fn trivial(window: Arc<GroupWindow>, n: usize) -> Result<Self> {
        let names = (0..n).map(|i| format!("p{i}")).collect();
        let space = FiniteMetricSpace::new(names, |_, _| q::one())?;
        let action = PartialAction::trivial(window.len(), n);
        Ok(CompactificationModel {
            window,
            space,
            boundary: vec![false; n],
            action,
        })
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn boundary_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.boundary[x]).collect()
    }

    pub fn interior_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| !self.boundary[x]).collect()
    }

    pub fn law_report(&self) -> Result<ActionReport> {
        self.action.check_laws(&self.window)
    }
}

/// Points on which every listed group element is defined.
pub fn stable_points(action: &PartialAction, elems: &[usize]) -> Vec<usize> {
    (0..action.points())
        .filter(|&x| elems.iter().all(|&g| action.apply(g, x).is_some()))
        .collect()
}

/// `[−∞, +∞]` discretized to `{−∞} ∪ {−R..R} ∪ {+∞}` with translations.
///
/// The metric is `|p(x) − p(y)|` for the order isomorphism
/// `p(x) = x / (|x| + 1)`, `p(±∞) = ±1`.
pub fn interval_compactification(window: Arc<GroupWindow>) -> Result<CompactificationModel> {
    if *window.spec() != GroupSpec::integers() {
        return Err(Error::InvalidSpec("the interval model needs a window of Z".into()));
    }
    let r = window.radius() as i64;
    let n = (2 * r + 3) as usize;
    let names: Vec<String> = (0..n)
        .map(|i| match i {
            0 => "-inf".to_string(),
            i if i == n - 1 => "+inf".to_string(),
            i => (i as i64 - 1 - r).to_string(),
        })
        .collect();
    let pos = |i: usize| -> Q {
        match i {
            0 => -q::one(),
            i if i == n - 1 => q::one(),
            i => {
                let x = i as i64 - 1 - r;
                q::frac(x, x.abs() + 1)
            }
        }
    };
    let space = FiniteMetricSpace::new_unchecked(names, |x, y| (pos(x) - pos(y)).abs())?;
    let shift: Vec<i64> = window
        .elements()
        .iter()
        .map(|e| match e {
            Elem::Lattice(v) => v[0],
            _ => unreachable!(),
        })
        .collect();
    let action = PartialAction::from_fn(window.len(), n, |g, x| {
        if x == 0 || x == n - 1 {
            return Some(x);
        }
        let y = x as i64 - 1 - r + shift[g];
        (y.abs() <= r).then(|| (y + r + 1) as usize)
    });
    let mut boundary = vec![false; n];
    boundary[0] = true;
    boundary[n - 1] = true;
    Ok(CompactificationModel {
        window,
        space,
        boundary,
        action,
    })
}

/// The rooted `F_k` tree truncated at depth `D`.
///
/// Interior points are reduced words of length `< D`, boundary points are
/// words of length exactly `D` standing for the cylinder of ends they
/// prefix. `d(x, y) = 2^{-lcp(x, y)}`. On the interior, `g` acts by reduced
/// left multiplication when the result stays shorter than `D`. On a
/// boundary word `w`, `g·w` is the depth-`D` prefix of `red(gw)`, defined
/// when the cancellation leaves part of `w` and the result has length at
/// least `D`: then `g` maps the whole cylinder of `w` into that cylinder.
pub fn tree_boundary_model(k: usize, depth: usize, window_radius: u32, cap: usize) -> Result<CompactificationModel> {
    if k == 0 || depth == 0 {
        return Err(Error::Parameter("tree model needs k >= 1 and D >= 1".into()));
    }
    let window = Arc::new(GroupWindow::build(&GroupSpec::free(k), window_radius)?);
    let mut words: Vec<Vec<i32>> = vec![vec![]];
    let mut layer: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for l in (1..=k as i32).flat_map(|l| [l, -l]) {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        words.extend(next.iter().cloned());
        if words.len() > cap {
            return Err(Error::SizeCap { cap });
        }
        layer = next;
    }
    words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let index: HashMap<Vec<i32>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let names: Vec<String> = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|&l| letter_char(l)).collect()
            }
        })
        .collect();
    let half = q::frac(1, 2);
    let space = FiniteMetricSpace::new_unchecked(names, |x, y| {
        let lcp = words[x].iter().zip(&words[y]).take_while(|(a, b)| a == b).count();
        num_traits::pow(half, lcp)
    })?;
    let boundary: Vec<bool> = words.iter().map(|w| w.len() == depth).collect();
    let action = PartialAction::from_fn(window.len(), words.len(), |g, x| {
        let Elem::Word(g) = window.elem(g) else { unreachable!() };
        let w = &words[x];
        let mut i = g.len();
        let mut c = 0;
        while i > 0 && c < w.len() && g[i - 1] == -w[c] {
            i -= 1;
            c += 1;
        }
        let mut v: Vec<i32> = g[..i].to_vec();
        v.extend_from_slice(&w[c..]);
        if w.len() < depth {
            (v.len() < depth).then(|| index[&v])
        } else if c < depth && v.len() >= depth {
            v.truncate(depth);
            Some(index[&v])
        } else {
            None
        }
    });
    Ok(CompactificationModel {
        window,
        space,
        boundary,
        action,
    })
}
