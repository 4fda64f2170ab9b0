use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Partial vertex maps, one per group element (window index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexAction {
    maps: Vec<Vec<Option<u32>>>,
}

impl VertexAction {
    pub fn from_fn(group_size: usize, vertices: usize, f: impl Fn(usize, usize) -> Option<usize>) -> Self {
        VertexAction {
            maps: (0..group_size)
                .map(|g| (0..vertices).map(|v| f(g, v).map(|u| u as u32)).collect())
                .collect(),
        }
    }

    pub fn group_size(&self) -> usize {
        self.maps.len()
    }

    pub fn apply(&self, g: usize, v: usize) -> Option<usize> {
        self.maps[g][v].map(|u| u as usize)
    }

    /// Image of a vertex set, sorted; `None` if some vertex has no image.
    pub fn apply_set(&self, g: usize, s: &[usize]) -> Option<Vec<usize>> {
        let mut out: Vec<usize> = s.iter().map(|&v| self.apply(g, v)).collect::<Option<_>>()?;
        out.sort_unstable();
        Some(out)
    }
}

/// A finite abstract simplicial complex, stored with every simplex.
///
/// Simplices are sorted vertex lists, indexed in (cardinality, lexicographic)
/// order. For a barycentric subdivision, `carrier(v)` is the simplex of the
/// parent complex that the vertex `v` stands for.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    names: Vec<String>,
    simplices: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    carriers: Option<Vec<Vec<usize>>>,
    action: Option<VertexAction>,
}

const MAX_SIMPLEX_VERTICES: usize = 16;

impl SimplicialComplex {
    /// Downward closure of the given simplices.
    pub fn from_maximal(names: Vec<String>, maximal: &[Vec<usize>]) -> Result<Self> {
        let n = names.len();
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if s.len() > MAX_SIMPLEX_VERTICES {
                return Err(Error::Complex(format!("simplex with {} vertices is too large", s.len())));
            }
            if s.iter().any(|&v| v >= n) {
                return Err(Error::Complex("vertex index out of range".into()));
            }
            if all.contains(&s) {
                continue;
            }
            for mask in 1u32..(1 << s.len()) {
                let face: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                all.insert(face);
            }
        }
        for v in 0..n {
            all.insert(vec![v]);
        }
        let mut simplices: Vec<Vec<usize>> = all.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(SimplicialComplex {
            names,
            simplices,
            index,
            carriers: None,
            action: None,
        })
    }

    /// Attaches a vertex action after checking it is simplicial wherever it
    /// is defined on a whole simplex.
    pub fn with_action(mut self, action: VertexAction) -> Result<Self> {
        for g in 0..action.group_size() {
            for s in &self.simplices {
                if let Some(img) = action.apply_set(g, s) {
                    if img.len() != s.len() || !self.index.contains_key(&img) {
                        return Err(Error::Complex(format!(
                            "group element {g} does not map simplex {} to a simplex",
                            self.simplex_name(s)
                        )));
                    }
                }
            }
        }
        self.action = Some(action);
        Ok(self)
    }

    pub fn action(&self) -> Option<&VertexAction> {
        self.action.as_ref()
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn simplex_name(&self, s: &[usize]) -> String {
        let parts: Vec<&str> = s.iter().map(|&v| self.names[v].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex_index(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn is_simplex(&self, s: &[usize]) -> bool {
        self.index.contains_key(s)
    }

    pub fn dimension(&self) -> isize {
        self.simplices.iter().map(|s| s.len() as isize - 1).max().unwrap_or(-1)
    }

    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for s in &self.simplices {
            let is_face = self.simplices.iter().any(|t| t.len() == s.len() + 1 && s.iter().all(|v| t.contains(v)));
            if !is_face {
                out.push(s.clone());
            }
        }
        out
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.simplices.iter().filter(|s| s.len() == 2).map(|s| (s[0], s[1]))
    }

    /// Cardinality of the carrier simplex, for subdivision vertices.
    pub fn grade(&self, v: usize) -> Option<usize> {
        self.carriers.as_ref().map(|c| c[v].len())
    }

    pub fn carrier(&self, v: usize) -> Option<&[usize]> {
        self.carriers.as_ref().map(|c| c[v].as_slice())
    }

    /// Window elements `g` with `g·s = s` (defined on all of `s`).
    pub fn stabilizer(&self, s: &[usize]) -> Vec<usize> {
        let Some(a) = &self.action else { return vec![] };
        (0..a.group_size()).filter(|&g| a.apply_set(g, s).as_deref() == Some(s)).collect()
    }

    /// Vertices are the simplices of `self`, simplices are chains under
    /// inclusion. The action is induced on carriers.
    pub fn barycentric_subdivision(&self) -> Result<Self> {
        let names: Vec<String> = self.simplices.iter().map(|s| self.simplex_name(s)).collect();
        let mut flags: Vec<Vec<usize>> = Vec::new();
        for m in self.maximal_simplices() {
            for perm in permutations(&m) {
                let flag = (1..=perm.len())
                    .map(|j| {
                        let mut face = perm[..j].to_vec();
                        face.sort_unstable();
                        self.index[&face]
                    })
                    .collect();
                flags.push(flag);
            }
        }
        let mut sk = SimplicialComplex::from_maximal(names, &flags)?;
        sk.carriers = Some(self.simplices.clone());
        if let Some(a) = &self.action {
            let induced = VertexAction::from_fn(a.group_size(), self.simplices.len(), |g, v| {
                a.apply_set(g, &self.simplices[v]).map(|img| self.index[&img])
            });
            sk = sk.with_action(induced)?;
        }
        Ok(sk)
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}
