use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::group::{free_root, Elem, Group};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Trivial,
    Finite,
    Vcyc,
    All,
}

/// A family of subgroups, decided on the subgroup generated by a finite
/// list of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyPredicate {
    pub kind: FamilyKind,
}

impl FamilyPredicate {
    pub fn new(kind: FamilyKind) -> Self {
        FamilyPredicate { kind }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let kind = match s {
            "trivial" => FamilyKind::Trivial,
            "finite" | "fin" => FamilyKind::Finite,
            "vcyc" => FamilyKind::Vcyc,
            "all" => FamilyKind::All,
            _ => return None,
        };
        Some(FamilyPredicate { kind })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Trivial => "trivial",
            FamilyKind::Finite => "finite",
            FamilyKind::Vcyc => "vcyc",
            FamilyKind::All => "all",
        }
    }

    /// Closed under finite-index overgroups.
    pub fn virtually_closed(&self) -> bool {
        !matches!(self.kind, FamilyKind::Trivial)
    }

    /// Decides whether `⟨elems⟩` belongs to the family.
    ///
    /// The subgroup is projected to the torsion-free factors (lattices and
    /// free groups); finite factors only contribute a finite kernel. It is
    /// finite iff the projection is trivial, and virtually cyclic iff the
    /// projection is cyclic: pairwise commuting free components share a
    /// root, and the resulting exponent vectors span a rank ≤ 1 lattice.
    pub fn contains(&self, group: &Group, elems: &[Elem]) -> bool {
        match self.kind {
            FamilyKind::All => true,
            FamilyKind::Trivial => elems.iter().all(|e| group.is_identity(e)),
            FamilyKind::Finite => elems.iter().all(|e| {
                let (lat, words, _) = group.torsion_free_parts(e);
                lat.iter().all(|&v| v == 0) && words.iter().all(Vec::is_empty)
            }),
            FamilyKind::Vcyc => is_virtually_cyclic(group, elems),
        }
    }
}

fn is_virtually_cyclic(group: &Group, elems: &[Elem]) -> bool {
    let parts: Vec<(Vec<i64>, Vec<Vec<i32>>)> = elems
        .iter()
        .map(|e| {
            let (lat, words, _) = group.torsion_free_parts(e);
            (lat, words)
        })
        .collect();
    let Some(nfree) = parts.first().map(|p| p.1.len()) else {
        return true;
    };
    let mut roots: Vec<Option<Vec<i32>>> = vec![None; nfree];
    let mut vectors: Vec<Vec<i128>> = Vec::new();
    let mut cache: HashMap<Vec<i32>, (Vec<i32>, i64)> = HashMap::new();
    for (lat, words) in &parts {
        let mut v: Vec<i128> = lat.iter().map(|&c| c as i128).collect();
        for (j, w) in words.iter().enumerate() {
            if w.is_empty() {
                v.push(0);
                continue;
            }
            let (r, e) = cache.entry(w.clone()).or_insert_with(|| free_root(w).unwrap()).clone();
            match &roots[j] {
                None => roots[j] = Some(r),
                Some(r0) if *r0 == r => {}
                Some(_) => return false,
            }
            v.push(e as i128);
        }
        vectors.push(v);
    }
    let nonzero: Vec<&Vec<i128>> = vectors.iter().filter(|v| v.iter().any(|&c| c != 0)).collect();
    let Some(base) = nonzero.first() else { return true };
    nonzero.iter().all(|v| {
        (0..v.len()).all(|i| (0..v.len()).all(|j| base[i] * v[j] == base[j] * v[i]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn lattice_rank_decides_vcyc() {
        let z2 = Group::new(GroupSpec::free_abelian(2)).unwrap();
        let vc = FamilyPredicate::new(FamilyKind::Vcyc);
        let e1 = Elem::Lattice(vec![1, 0]);
        let e2 = Elem::Lattice(vec![0, 1]);
        assert!(!vc.contains(&z2, &[e1.clone(), e2]));
        assert!(vc.contains(&z2, &[e1.clone(), Elem::Lattice(vec![-3, 0])]));
        assert!(!FamilyPredicate::new(FamilyKind::Finite).contains(&z2, &[e1]));
    }

    #[test]
    fn free_group_vcyc_uses_roots() {
        let f2 = Group::new(GroupSpec::free(2)).unwrap();
        let vc = FamilyPredicate::new(FamilyKind::Vcyc);
        let ab = f2.parse("ab").unwrap();
        let abab = f2.parse("abab").unwrap();
        let a = f2.parse("a").unwrap();
        assert!(vc.contains(&f2, &[ab.clone(), abab, f2.inv(&ab)]));
        assert!(!vc.contains(&f2, &[ab, a]));
    }

    #[test]
    fn products_mix_lattice_and_free_parts() {
        let g = Group::new(GroupSpec::product(vec![GroupSpec::integers(), GroupSpec::free(2), GroupSpec::cyclic(3)])).unwrap();
        let vc = FamilyPredicate::new(FamilyKind::Vcyc);
        let x = g.parse("(1;a;0)").unwrap();
        let y = g.parse("(2;aa;1)").unwrap();
        let z = g.parse("(0;a;0)").unwrap();
        assert!(vc.contains(&g, &[x.clone(), y]));
        assert!(!vc.contains(&g, &[x, z]));
        let t = g.parse("(0;1;2)").unwrap();
        assert!(FamilyPredicate::new(FamilyKind::Finite).contains(&g, &[t.clone()]));
        assert!(!FamilyPredicate::new(FamilyKind::Trivial).contains(&g, &[t]));
    }
}
