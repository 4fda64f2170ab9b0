use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::q::{self, Q};

/// A finite metric space with named points and an exact rational metric.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    names: Vec<String>,
    index: HashMap<String, usize>,
    d: Vec<Q>,
}

impl FiniteMetricSpace {
    /// Builds the space and checks the metric axioms exactly.
    pub fn new(names: Vec<String>, d: impl Fn(usize, usize) -> Q) -> Result<Self> {
        let s = Self::new_unchecked(names, d)?;
        s.check_axioms()?;
        Ok(s)
    }

    /// Builds the space without the O(n³) triangle check. Symmetry and
    /// positivity are still enforced.
    pub fn new_unchecked(names: Vec<String>, d: impl Fn(usize, usize) -> Q) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Metric(format!("duplicate point name {name:?}")));
            }
        }
        let mut m = vec![Q::zero(); n * n];
        for x in 0..n {
            for y in x + 1..n {
                let v = d(x, y);
                if v <= Q::zero() {
                    return Err(Error::Metric(format!(
                        "d({}, {}) = {} is not positive",
                        names[x],
                        names[y],
                        q::fmt(&v)
                    )));
                }
                m[x * n + y] = v;
                m[y * n + x] = v;
            }
        }
        Ok(FiniteMetricSpace { names, index, d: m })
    }

    pub fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                let dxy = self.dist(x, y);
                for z in 0..n {
                    if dxy > self.dist(x, z) + self.dist(z, y) {
                        return Err(Error::Metric(format!(
                            "triangle inequality fails at ({}, {}, {})",
                            self.names[x], self.names[y], self.names[z]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn dist(&self, x: usize, y: usize) -> Q {
        self.d[x * self.len() + y]
    }

    /// All distinct positive distances, ascending.
    pub fn realized_distances(&self) -> Vec<Q> {
        let n = self.len();
        let set: BTreeSet<Q> = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .map(|(x, y)| self.dist(x, y))
            .collect();
        set.into_iter().collect()
    }

    pub fn diameter(&self) -> Q {
        self.d.iter().copied().max().unwrap_or_else(Q::zero)
    }

    pub fn min_positive_distance(&self) -> Option<Q> {
        self.d.iter().copied().filter(|v| *v > Q::zero()).min()
    }

    /// Points at distance `< r` from `x`.
    pub fn open_ball(&self, x: usize, r: &Q) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.dist(x, y) < *r).collect()
    }

    /// Upper-triangular distance list in row order, as used by documents.
    pub fn upper_triangle(&self) -> Vec<Q> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .map(|(x, y)| self.dist(x, y))
            .collect()
    }

    pub fn from_upper_triangle(names: Vec<String>, upper: &[Q]) -> Result<Self> {
        let n = names.len();
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::Document("metric list has the wrong length".into()));
        }
        let offset = |x: usize| x * (2 * n - x - 1) / 2;
        Self::new(names, |x, y| upper[offset(x) + (y - x - 1)])
    }
}
