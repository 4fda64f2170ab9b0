use std::path::PathBuf;

use ccw_core::characterisations::{abelian_obstruction_check, zero_dim_structure_check};
use ccw_core::covers::{
    equivariance_check, f_subset_check, family_dimension, g_multiplicity, lebesgue_check, r_disjointness_check,
    split_boundary_parts, FSubsetVerdict, FamilyPredicate,
};
use ccw_core::homotopy::{adb_modulus_probe, n_long_check};
use ccw_core::q::{self, Q};
use ccw_core::report::{error_exit_code, Certificate, Verdict, EXIT_DOCUMENT};
use ccw_core::{Error, Result};
use clap::{Args, ValueEnum};
use serde_json::json;

use crate::docs::{self, Cover, Space};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CheckKind {
    Lebesgue,
    FSubset,
    Dimension,
    Multiplicity,
    NLong,
    Equivariance,
    RDisjoint,
    BoundarySplit,
    ZeroDim,
    Abelian,
    AdbModulus,
}

impl CheckKind {
    fn name(self) -> &'static str {
        match self {
            CheckKind::Lebesgue => "lebesgue",
            CheckKind::FSubset => "f-subset",
            CheckKind::Dimension => "dimension",
            CheckKind::Multiplicity => "multiplicity",
            CheckKind::NLong => "n-long",
            CheckKind::Equivariance => "equivariance",
            CheckKind::RDisjoint => "r-disjoint",
            CheckKind::BoundarySplit => "boundary-split",
            CheckKind::ZeroDim => "zero-dim",
            CheckKind::Abelian => "abelian",
            CheckKind::AdbModulus => "adb-modulus",
        }
    }
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub what: CheckKind,
    #[arg(long)]
    pub cover: Option<PathBuf>,
    /// Space document; defaults to `<cover>-space.json`.
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long)]
    pub homotopy: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, default_value = "vcyc")]
    pub family: String,
    /// Restrict `f-subset` to one member.
    #[arg(long)]
    pub member: Option<usize>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<String>,
    /// Commuting elements for the abelian obstruction, comma separated.
    #[arg(long)]
    pub z: Option<String>,
    /// Point fixed by the elements of `--z`.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    /// Seed points `g|x`, comma separated.
    #[arg(long)]
    pub seeds: Option<String>,
    /// Certificate path; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn run(a: &CheckArgs) -> i32 {
    let cert = match evaluate(a) {
        Ok(c) => c,
        Err(e) if error_exit_code(&e) == EXIT_DOCUMENT => return docs::fatal(&e),
        Err(e) => {
            eprintln!("error: {e}");
            docs::error_certificate(a.what.name(), &e)
        }
    };
    match docs::write_document(a.output.as_deref(), &cert.to_value()) {
        Ok(()) => cert.verdict.exit_code(),
        Err(e) => docs::fatal(&e),
    }
}

fn rational(v: &Option<String>, flag: &str) -> Result<Q> {
    q::parse(v.as_deref().ok_or_else(|| Error::Parameter(format!("--{flag} is required")))?)
}

fn space_for(a: &CheckArgs) -> Result<Space> {
    match (&a.space, &a.cover) {
        (Some(p), _) => docs::load_space(p),
        (None, Some(c)) => docs::load_space(&docs::sibling(c, "space")),
        (None, None) => Err(Error::Parameter("--space is required".into())),
    }
}

fn family(a: &CheckArgs) -> Result<FamilyPredicate> {
    FamilyPredicate::parse(&a.family).ok_or_else(|| Error::Parameter(format!("unknown family {:?}", a.family)))
}

fn evaluate(a: &CheckArgs) -> Result<Certificate> {
    let space = space_for(a)?;
    let window = &space.model.window;
    let base = Certificate::new(a.what.name(), Verdict::Pass).input("space", &space.hash);
    let cover = || -> Result<Cover> { docs::load_cover(docs::required(&a.cover, "cover")?, &space) };
    match a.what {
        CheckKind::Lebesgue => {
            let c = cover()?;
            let alpha = rational(&a.alpha, "alpha")?;
            let r = lebesgue_check(&c.cover, &alpha)?;
            let witness = r.witness.map(|p| c.cover.ground.name(p));
            Ok(with_cover(base, &c)
                .param("alpha", q::fmt(&alpha))
                .radii(r.window_radius, Some(r.inner_radius))
                .details(json!({ "witness": witness, "checked": r.checked }))
                .verdict_if(r.passed))
        }
        CheckKind::FSubset => {
            let c = cover()?;
            let fam = family(a)?;
            let members: Vec<usize> = match a.member {
                Some(i) if i < c.cover.len() => vec![i],
                Some(i) => return Err(Error::Parameter(format!("member {i} out of range"))),
                None => (0..c.cover.len()).collect(),
            };
            let mut failures = Vec::new();
            let mut stabilizers = Vec::new();
            for &i in &members {
                let r = f_subset_check(&c.cover, i, &fam)?;
                stabilizers.push(r.stabilizer.iter().map(|&g| window.name(g)).collect::<Vec<_>>());
                match r.verdict {
                    FSubsetVerdict::Ok => {}
                    FSubsetVerdict::OrbitOverlap { g } => {
                        failures.push(json!({ "member": i, "orbit_overlap": window.name(g) }))
                    }
                    FSubsetVerdict::StabilizerViolation => failures.push(json!({ "member": i, "stabilizer_outside_family": true })),
                }
            }
            let ok = failures.is_empty();
            Ok(with_cover(base, &c)
                .param("family", fam.name())
                .radii(window.radius(), None)
                .details(json!({ "members": members, "failures": failures, "window_stabilizers": stabilizers }))
                .verdict_if(ok))
        }
        CheckKind::Dimension => {
            let c = cover()?;
            let dim = family_dimension(&c.cover);
            let ok = a.n.is_none_or(|n| dim <= n as isize);
            Ok(with_cover(base, &c)
                .param("n", a.n)
                .radii(window.radius(), None)
                .details(json!({ "dimension": dim, "members": c.cover.len() }))
                .verdict_if(ok))
        }
        CheckKind::Multiplicity => {
            let c = cover()?;
            let d = rational(&a.d, "d")?;
            let r = g_multiplicity(&c.cover, &d)?;
            let ok = a.n.is_none_or(|n| r.value <= n + 1);
            Ok(with_cover(base, &c)
                .param("d", q::fmt(&d))
                .param("n", a.n)
                .radii(window.radius(), Some(r.inner_radius))
                .details(json!({ "multiplicity": r.value, "witness": r.witness.map(|p| c.cover.ground.name(p)) }))
                .verdict_if(ok))
        }
        CheckKind::NLong => {
            let c = cover()?;
            let h = docs::load_homotopy(docs::required(&a.homotopy, "homotopy")?, &space)?;
            let n = a.n.ok_or_else(|| Error::Parameter("--n is required".into()))?;
            let r = n_long_check(&c.cover, &h.ha, n)?;
            let verdict = if r.inconclusive {
                Verdict::Inconclusive
            } else {
                Verdict::from_bool(r.passed)
            };
            let mut cert = with_cover(base, &c)
                .input("homotopy", &h.hash)
                .param("n", n)
                .radii(window.radius(), Some(r.inner_radius))
                .details(json!({ "witness": r.witness.map(|p| c.cover.ground.name(p)), "checked": r.checked }));
            cert.verdict = verdict;
            Ok(cert)
        }
        CheckKind::Equivariance => {
            let c = cover()?;
            let r = equivariance_check(&c.cover);
            let unmatched: Vec<_> = r.unmatched.iter().map(|&(i, g)| json!([i, window.name(g)])).collect();
            Ok(with_cover(base, &c)
                .radii(window.radius(), None)
                .details(json!({ "orbits": r.orbits, "matched": r.matched, "unmatched": unmatched }))
                .verdict_if(r.unmatched.is_empty()))
        }
        CheckKind::RDisjoint => {
            let c = cover()?;
            let r = rational(&a.r, "r")?;
            let found = r_disjointness_check(&c.cover, &r)?;
            let witness = found.map(|(i, j, p)| json!({ "members": [i, j], "point": c.cover.ground.name(p) }));
            Ok(with_cover(base, &c)
                .param("r", q::fmt(&r))
                .radii(window.radius(), window.inner_radius(&r))
                .details(json!({ "witness": witness }))
                .verdict_if(found.is_none()))
        }
        CheckKind::BoundarySplit => {
            let c = cover()?;
            let s = split_boundary_parts(&c.cover);
            Ok(with_cover(base, &c)
                .radii(window.radius(), None)
                .details(json!({
                    "dim": s.dim,
                    "dim_interior": s.dim_interior,
                    "dim_boundary": s.dim_boundary,
                    "ledger": format!("{} <= {} + {} + 1", s.dim, s.dim_boundary, s.dim_interior),
                }))
                .verdict_if(s.bound_holds()))
        }
        CheckKind::ZeroDim => {
            let c = cover()?;
            let alpha = rational(&a.alpha, "alpha")?;
            let r = zero_dim_structure_check(&c.cover, &alpha)?;
            let sp = &space.model.space;
            let slices: Vec<Vec<&str>> = r.slices.iter().map(|s| s.iter().map(|&x| sp.name(x)).collect()).collect();
            let witness = r.witness.map(|(i, p)| json!({ "member": i, "point": c.cover.ground.name(p) }));
            Ok(with_cover(base, &c)
                .param("alpha", q::fmt(&alpha))
                .radii(window.radius(), Some(r.inner_radius))
                .details(json!({ "witness": witness, "slices": slices, "orbit_sizes": r.orbit_sizes }))
                .verdict_if(r.passed))
        }
        CheckKind::Abelian => {
            let c = cover()?;
            let alpha = rational(&a.alpha, "alpha")?;
            let fam = family(a)?;
            let z: Vec<usize> = a
                .z
                .as_deref()
                .ok_or_else(|| Error::Parameter("--z is required".into()))?
                .split(',')
                .map(|s| window.lookup(s.trim()))
                .collect::<Result<_>>()?;
            let xname = a.x.as_deref().ok_or_else(|| Error::Parameter("--x is required".into()))?;
            let x = space
                .model
                .space
                .index_of(xname)
                .ok_or_else(|| Error::Parameter(format!("unknown point {xname:?}")))?;
            let r = abelian_obstruction_check(&c.cover, &alpha, &z, x, &fam)?;
            Ok(with_cover(base, &c)
                .param("alpha", q::fmt(&alpha))
                .param("family", fam.name())
                .param("z", z.iter().map(|&g| window.name(g)).collect::<Vec<_>>())
                .param("x", xname)
                .radii(window.radius(), window.inner_radius(&alpha))
                .details(json!({ "member": r.member, "stabilizes": r.stabilizes, "violation": r.violation }))
                .verdict_if(!r.violation))
        }
        CheckKind::AdbModulus => {
            let h = docs::load_homotopy(docs::required(&a.homotopy, "homotopy")?, &space)?;
            let n = a.n.ok_or_else(|| Error::Parameter("--n is required".into()))?;
            let eps = rational(&a.eps, "eps")?;
            let ground = docs::ground(&space, ccw_core::covers::GroundAction::Translation)?;
            let mut set = ground.empty_set();
            let seeds = a.seeds.as_deref().unwrap_or("1|+inf");
            for s in seeds.split(',') {
                let (g, x) = s
                    .trim()
                    .split_once('|')
                    .ok_or_else(|| Error::Parameter(format!("seed {s:?} is not g|x")))?;
                let x = space
                    .model
                    .space
                    .index_of(x)
                    .ok_or_else(|| Error::Parameter(format!("unknown point {x:?}")))?;
                set.insert(ground.idx(window.lookup(g)?, x));
            }
            let r = adb_modulus_probe(&h.ha, &ground, &set, n, &eps)?;
            let mut cert = base
                .input("homotopy", &h.hash)
                .param("n", n)
                .param("eps", q::fmt(&eps))
                .param("seeds", seeds)
                .radii(window.radius(), None)
                .details(json!({ "delta": q::fmt(&r.delta), "candidates": r.candidates, "clipped": r.clipped }));
            cert.verdict = if r.clipped {
                Verdict::Inconclusive
            } else {
                Verdict::from_bool(r.delta > Q::from_integer(0))
            };
            Ok(cert)
        }
    }
}

fn with_cover(c: Certificate, cover: &Cover) -> Certificate {
    c.input("cover", &cover.hash).param("action", cover.cover.ground.action)
}
