use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serializable description of a finitely generated group together with its
/// generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// ℤⁿ with the standard basis and its negatives.
    FreeAbelian { rank: usize },
    /// F_k on letters a, b, c, ... (inverses A, B, C, ...).
    Free { rank: usize },
    /// A finite group given by its multiplication table and generators
    /// (table indices). The generating set is symmetrized automatically.
    Finite {
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
    },
    /// Direct product; each factor's generators are embedded separately.
    Product { factors: Vec<GroupSpec> },
}

impl GroupSpec {
    pub fn integers() -> Self {
        GroupSpec::FreeAbelian { rank: 1 }
    }

    pub fn free_abelian(rank: usize) -> Self {
        GroupSpec::FreeAbelian { rank }
    }

    pub fn free(rank: usize) -> Self {
        GroupSpec::Free { rank }
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        GroupSpec::Finite {
            table,
            generators: if n > 1 { vec![1] } else { vec![] },
        }
    }

    /// The symmetric group on three letters, elements listed as
    /// permutations of `[0,1,2]` in lexicographic order.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| idx([p[q[0]], p[q[1]], p[q[2]]]))
                    .collect()
            })
            .collect();
        GroupSpec::Finite {
            table,
            generators: vec![1, 3],
        }
    }

    pub fn klein4() -> Self {
        let table = (0..4)
            .map(|i: usize| (0..4).map(|j: usize| i ^ j).collect())
            .collect();
        GroupSpec::Finite {
            table,
            generators: vec![1, 2],
        }
    }

    pub fn product(factors: Vec<GroupSpec>) -> Self {
        GroupSpec::Product { factors }
    }
}

/// Canonical normal forms: coordinate vectors for ℤⁿ, freely reduced words
/// for F_k (letter `i+1` is generator `i`, `-(i+1)` its inverse), table
/// indices for finite groups, tuples for products.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Lattice(Vec<i64>),
    Word(Vec<i32>),
    Finite(usize),
    Product(Vec<Elem>),
}

/// Letter `l` rendered as `a..z` (generators) or `A..Z` (inverses).
pub fn letter_char(l: i32) -> char {
    let i = (l.unsigned_abs() - 1) as u8;
    if l > 0 {
        (b'a' + i) as char
    } else {
        (b'A' + i) as char
    }
}

fn char_letter(c: char) -> Option<i32> {
    if c.is_ascii_lowercase() {
        Some((c as u8 - b'a') as i32 + 1)
    } else if c.is_ascii_uppercase() {
        Some(-((c as u8 - b'A') as i32 + 1))
    } else {
        None
    }
}

pub(crate) fn reduce_word(w: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Root and exponent of a nontrivial reduced word: `w = c · r^e · c⁻¹`
/// with `r` cyclically reduced and not a proper power. The sign of `e` is
/// normalized so that the returned root is the lexicographically smaller of
/// `r` and `r⁻¹`. Two nontrivial elements of a free group commute iff their
/// roots coincide.
pub fn free_root(w: &[i32]) -> Option<(Vec<i32>, i64)> {
    if w.is_empty() {
        return None;
    }
    // strip conjugator
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == -w[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    let prefix = &w[..lo];
    let core = &w[lo..hi];
    let n = core.len();
    let mut period = n;
    for p in 1..=n {
        if n % p == 0 && (0..n).all(|i| core[i] == core[i % p]) {
            period = p;
            break;
        }
    }
    let r: Vec<i32> = core[..period].to_vec();
    let e = (n / period) as i64;
    // include conjugator in the root: c r c^-1
    let with_conj = |r: &[i32]| {
        let mut v: Vec<i32> = prefix.to_vec();
        v.extend_from_slice(r);
        v.extend(prefix.iter().rev().map(|l| -l));
        reduce_word(v)
    };
    let root = with_conj(&r);
    let inv: Vec<i32> = root.iter().rev().map(|l| -l).collect();
    if inv < root {
        Some((inv, -e))
    } else {
        Some((root, e))
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    lengths: Vec<u32>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    fn new(table: &[Vec<usize>], gens: &[usize]) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidSpec("multiplication table must be square with entries < n".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidSpec("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidSpec(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidSpec(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        if gens.iter().any(|&g| g >= n) {
            return Err(Error::InvalidSpec("generator index out of range".into()));
        }
        let mut generators: Vec<usize> = gens
            .iter()
            .flat_map(|&g| [g, inverse[g]])
            .filter(|&g| g != identity)
            .collect();
        generators.sort_unstable();
        generators.dedup();
        let mut lengths = vec![u32::MAX; n];
        lengths[identity] = 0;
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for &s in &generators {
                let y = table[x][s];
                if lengths[y] == u32::MAX {
                    lengths[y] = lengths[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if lengths.contains(&u32::MAX) {
            return Err(Error::InvalidSpec("generators do not generate the finite group".into()));
        }
        Ok(FiniteGroup {
            table: table.to_vec(),
            identity,
            inverse,
            lengths,
            generators,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn diameter(&self) -> u32 {
        self.lengths.iter().copied().max().unwrap_or(0)
    }
}

/// A validated group with the caches needed for exact word arithmetic.
#[derive(Clone, Debug)]
pub struct Group {
    spec: GroupSpec,
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    FreeAbelian(usize),
    Free(usize),
    Finite(FiniteGroup),
    Product(Vec<Group>),
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        let kind = match &spec {
            GroupSpec::FreeAbelian { rank } => {
                if *rank == 0 {
                    return Err(Error::InvalidSpec("free abelian rank must be positive".into()));
                }
                Kind::FreeAbelian(*rank)
            }
            GroupSpec::Free { rank } => {
                if *rank == 0 || *rank > 26 {
                    return Err(Error::InvalidSpec("free rank must be in 1..=26".into()));
                }
                Kind::Free(*rank)
            }
            GroupSpec::Finite { table, generators } => Kind::Finite(FiniteGroup::new(table, generators)?),
            GroupSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidSpec("empty product".into()));
                }
                Kind::Product(factors.iter().cloned().map(Group::new).collect::<Result<_>>()?)
            }
        };
        Ok(Group { spec, kind })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn identity(&self) -> Elem {
        match &self.kind {
            Kind::FreeAbelian(n) => Elem::Lattice(vec![0; *n]),
            Kind::Free(_) => Elem::Word(vec![]),
            Kind::Finite(f) => Elem::Finite(f.identity),
            Kind::Product(fs) => Elem::Product(fs.iter().map(Group::identity).collect()),
        }
    }

    /// Symmetric generating set without the identity, in canonical order.
    pub fn generators(&self) -> Vec<Elem> {
        let mut out = match &self.kind {
            Kind::FreeAbelian(n) => {
                let mut v = Vec::new();
                for i in 0..*n {
                    for sign in [1, -1] {
                        let mut c = vec![0; *n];
                        c[i] = sign;
                        v.push(Elem::Lattice(c));
                    }
                }
                v
            }
            Kind::Free(k) => (1..=*k as i32)
                .flat_map(|l| [Elem::Word(vec![l]), Elem::Word(vec![-l])])
                .collect(),
            Kind::Finite(f) => f.generators.iter().map(|&g| Elem::Finite(g)).collect(),
            Kind::Product(fs) => {
                let ids: Vec<Elem> = fs.iter().map(Group::identity).collect();
                let mut v = Vec::new();
                for (i, f) in fs.iter().enumerate() {
                    for g in f.generators() {
                        let mut parts = ids.clone();
                        parts[i] = g;
                        v.push(Elem::Product(parts));
                    }
                }
                v
            }
        };
        out.sort();
        out
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (Kind::FreeAbelian(_), Elem::Lattice(x), Elem::Lattice(y)) => {
                Elem::Lattice(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (Kind::Free(_), Elem::Word(x), Elem::Word(y)) => {
                Elem::Word(reduce_word(x.iter().chain(y.iter()).copied()))
            }
            (Kind::Finite(f), Elem::Finite(x), Elem::Finite(y)) => Elem::Finite(f.table[*x][*y]),
            (Kind::Product(fs), Elem::Product(x), Elem::Product(y)) => Elem::Product(
                fs.iter()
                    .zip(x.iter().zip(y))
                    .map(|(g, (p, q))| g.mul(p, q))
                    .collect(),
            ),
            _ => panic!("element kind does not match group"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        match (&self.kind, a) {
            (Kind::FreeAbelian(_), Elem::Lattice(x)) => Elem::Lattice(x.iter().map(|v| -v).collect()),
            (Kind::Free(_), Elem::Word(w)) => Elem::Word(w.iter().rev().map(|l| -l).collect()),
            (Kind::Finite(f), Elem::Finite(x)) => Elem::Finite(f.inverse[*x]),
            (Kind::Product(fs), Elem::Product(x)) => {
                Elem::Product(fs.iter().zip(x).map(|(g, p)| g.inv(p)).collect())
            }
            _ => panic!("element kind does not match group"),
        }
    }

    /// Exact word length with respect to the symmetric generating set.
    pub fn word_length(&self, a: &Elem) -> u32 {
        match (&self.kind, a) {
            (Kind::FreeAbelian(_), Elem::Lattice(x)) => x.iter().map(|v| v.unsigned_abs() as u32).sum(),
            (Kind::Free(_), Elem::Word(w)) => w.len() as u32,
            (Kind::Finite(f), Elem::Finite(x)) => f.lengths[*x],
            (Kind::Product(fs), Elem::Product(x)) => fs.iter().zip(x).map(|(g, p)| g.word_length(p)).sum(),
            _ => panic!("element kind does not match group"),
        }
    }

    /// Word-metric distance `d(g,h) = |g⁻¹h|`.
    pub fn dist(&self, a: &Elem, b: &Elem) -> u32 {
        self.word_length(&self.mul(&self.inv(a), b))
    }

    pub fn is_identity(&self, a: &Elem) -> bool {
        *a == self.identity()
    }

    pub fn commute(&self, a: &Elem, b: &Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn normal_form(&self, a: &Elem) -> String {
        match (&self.kind, a) {
            (Kind::FreeAbelian(_), Elem::Lattice(x)) => {
                x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            }
            (Kind::Free(_), Elem::Word(w)) => {
                if w.is_empty() {
                    "1".into()
                } else {
                    w.iter().map(|&l| letter_char(l)).collect()
                }
            }
            (Kind::Finite(_), Elem::Finite(x)) => x.to_string(),
            (Kind::Product(fs), Elem::Product(x)) => format!(
                "({})",
                fs.iter().zip(x).map(|(g, p)| g.normal_form(p)).collect::<Vec<_>>().join(";")
            ),
            _ => panic!("element kind does not match group"),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Elem> {
        let bad = || Error::Document(format!("bad normal form {s:?}"));
        match &self.kind {
            Kind::FreeAbelian(n) => {
                let v: Vec<i64> = s
                    .split(',')
                    .map(|p| p.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?;
                if v.len() != *n {
                    return Err(bad());
                }
                Ok(Elem::Lattice(v))
            }
            Kind::Free(k) => {
                if s == "1" {
                    return Ok(Elem::Word(vec![]));
                }
                let w: Vec<i32> = s.chars().map(char_letter).collect::<Option<_>>().ok_or_else(bad)?;
                if w.iter().any(|l| l.unsigned_abs() as usize > *k) || reduce_word(w.clone()) != w {
                    return Err(bad());
                }
                Ok(Elem::Word(w))
            }
            Kind::Finite(f) => {
                let x: usize = s.trim().parse().map_err(|_| bad())?;
                if x >= f.order() {
                    return Err(bad());
                }
                Ok(Elem::Finite(x))
            }
            Kind::Product(fs) => {
                let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
                let parts = split_top_level(inner);
                if parts.len() != fs.len() {
                    return Err(bad());
                }
                Ok(Elem::Product(
                    fs.iter().zip(parts).map(|(g, p)| g.parse(p)).collect::<Result<_>>()?,
                ))
            }
        }
    }

    /// True when every pair of elements in any ball around the identity is
    /// joined by a geodesic that stays inside that ball.
    pub(crate) fn balls_are_convex(&self) -> bool {
        match &self.kind {
            Kind::FreeAbelian(_) | Kind::Free(_) => true,
            Kind::Finite(_) => false,
            Kind::Product(fs) => fs.iter().all(|f| matches!(f.kind, Kind::FreeAbelian(_) | Kind::Free(_))),
        }
    }

    /// Diameter of the Cayley graph for finite groups.
    pub(crate) fn finite_diameter(&self) -> Option<u32> {
        match &self.kind {
            Kind::Finite(f) => Some(f.diameter()),
            _ => None,
        }
    }

    /// Factor decomposition used by the family predicates: the free-abelian
    /// rank contributed by each lattice coordinate and the free factors.
    pub(crate) fn torsion_free_parts(&self, a: &Elem) -> (Vec<i64>, Vec<Vec<i32>>, bool) {
        // returns (lattice coordinates, free-group words, has_finite_component_only)
        let mut lat = Vec::new();
        let mut words = Vec::new();
        let mut finite_only = true;
        self.collect_parts(a, &mut lat, &mut words, &mut finite_only);
        (lat, words, finite_only)
    }

    fn collect_parts(&self, a: &Elem, lat: &mut Vec<i64>, words: &mut Vec<Vec<i32>>, finite_only: &mut bool) {
        match (&self.kind, a) {
            (Kind::FreeAbelian(_), Elem::Lattice(x)) => {
                *finite_only = false;
                lat.extend_from_slice(x)
            }
            (Kind::Free(_), Elem::Word(w)) => {
                *finite_only = false;
                words.push(w.clone())
            }
            (Kind::Finite(_), Elem::Finite(_)) => {}
            (Kind::Product(fs), Elem::Product(x)) => {
                for (g, p) in fs.iter().zip(x) {
                    g.collect_parts(p, lat, words, finite_only);
                }
            }
            _ => panic!("element kind does not match group"),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.kind {
            Kind::Finite(_) => true,
            Kind::Product(fs) => fs.iter().all(Group::is_finite),
            _ => false,
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            GroupSpec::Free { rank } => write!(f, "F_{rank}"),
            GroupSpec::Finite { table, .. } => write!(f, "finite(order {})", table.len()),
            GroupSpec::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_words_reduce_and_roundtrip() {
        let g = Group::new(GroupSpec::free(2)).unwrap();
        let a = g.parse("a").unwrap();
        let ab = g.parse("Ab").unwrap();
        assert_eq!(g.normal_form(&g.mul(&a, &ab)), "b");
        assert_eq!(g.normal_form(&g.identity()), "1");
        assert!(g.parse("aA").is_err());
        assert_eq!(g.word_length(&g.parse("abAB").unwrap()), 4);
    }

    #[test]
    fn roots_detect_commuting_words() {
        let (r1, e1) = free_root(&[1, 2, 1, 2]).unwrap();
        let (r2, e2) = free_root(&[-2, -1]).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(e1.abs(), 2);
        assert_eq!(e2.abs(), 1);
        assert_eq!(e1.signum(), -e2.signum());
        // conjugates of the same root
        let (c1, _) = free_root(&[2, 1, 1, -2]).unwrap();
        let (c2, _) = free_root(&[2, 1, -2]).unwrap();
        assert_eq!(c1, c2);
        let (d, _) = free_root(&[1]).unwrap();
        assert_ne!(d, c1);
    }

    #[test]
    fn finite_tables_validate() {
        let s3 = Group::new(GroupSpec::symmetric3()).unwrap();
        assert!(s3.is_finite());
        let bad = GroupSpec::Finite {
            table: vec![vec![0, 1], vec![1, 1]],
            generators: vec![1],
        };
        assert!(Group::new(bad).is_err());
        let not_generated = GroupSpec::Finite {
            table: GroupSpec::klein4().finite_table(),
            generators: vec![1],
        };
        assert!(Group::new(not_generated).is_err());
    }

    #[test]
    fn product_normal_forms_parse_back() {
        let g = Group::new(GroupSpec::product(vec![GroupSpec::integers(), GroupSpec::free(2)])).unwrap();
        for s in g.generators() {
            let nf = g.normal_form(&s);
            assert_eq!(g.parse(&nf).unwrap(), s);
            assert_eq!(g.word_length(&s), 1);
        }
    }

    impl GroupSpec {
        fn finite_table(&self) -> Vec<Vec<usize>> {
            match self {
                GroupSpec::Finite { table, .. } => table.clone(),
                _ => unreachable!(),
            }
        }
    }
}
