use std::path::{Path, PathBuf};

use ccw_core::boundary::{
    assemble_full_cover, boundary_epsilon, extend_boundary_cover, extension_equivariance, intersection_law,
    restriction_defect,
};
use ccw_core::characterisations::{
    cover_to_map, cover_to_multiplicity_cover, map_to_disjoint_families, multiplicity_to_lebesgue_cover, partition_lu,
    phi_to_psi, psi_to_phi, Weights,
};
use ccw_core::covers::{f_subset_check, family_dimension, CoverFamily, FSubsetVerdict, FamilyPredicate};
use ccw_core::gen::fiber_cover;
use ccw_core::io;
use ccw_core::q::{self, Q};
use ccw_core::refine::{as_fiber_cover, equivariant_lift, min_dim_refinement, point_family_dimension, quotient_space};
use ccw_core::report::{error_exit_code, Certificate, Verdict, EXIT_DOCUMENT};
use ccw_core::{Error, Result};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use crate::docs::{self, Space};
use crate::generate::ActionArg;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Direction {
    CoverToMap,
    MapToFamilies,
    PhiPsi,
    CoverToMult,
    MultToCover,
    BoundaryExtend,
    RefineEquivariant,
    PartitionLu,
}

impl Direction {
    fn name(self) -> &'static str {
        match self {
            Direction::CoverToMap => "cover-to-map",
            Direction::MapToFamilies => "map-to-families",
            Direction::PhiPsi => "phi-psi",
            Direction::CoverToMult => "cover-to-mult",
            Direction::MultToCover => "mult-to-cover",
            Direction::BoundaryExtend => "boundary-extend",
            Direction::RefineEquivariant => "refine-equivariant",
            Direction::PartitionLu => "partition-lu",
        }
    }
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    pub direction: Direction,
    #[arg(long)]
    pub cover: Option<PathBuf>,
    /// Space document; defaults to `<cover>-space.json`.
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long)]
    pub homotopy: Option<PathBuf>,
    /// Equivariant map document (`phi`).
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Almost equivariant map document (`psi`).
    #[arg(long)]
    pub psi: Option<PathBuf>,
    /// Interior cover for `boundary-extend`; fibers over interior points by default.
    #[arg(long)]
    pub interior: Option<PathBuf>,
    /// Group window document the space must be built over.
    #[arg(long)]
    pub group: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub d: Option<String>,
    /// Comma separated radii.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Weight table document for `partition-lu`.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "diagonal")]
    pub action: ActionArg,
    #[arg(long, default_value = "finite")]
    pub family: String,
    /// Certificates of the inputs, chained into the manifest.
    #[arg(long = "input-cert")]
    pub input_cert: Vec<PathBuf>,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Certificate path; defaults to `<output>-cert.json`.
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

pub fn run(a: &ConvertArgs) -> i32 {
    let cert_path = a.cert.clone().unwrap_or_else(|| docs::sibling(&a.output, "cert"));
    let (doc, cert) = match convert(a) {
        Ok(pair) => pair,
        Err(e) if error_exit_code(&e) == EXIT_DOCUMENT => return docs::fatal(&e),
        Err(e) => {
            eprintln!("error: {e}");
            (None, docs::error_certificate(a.direction.name(), &e))
        }
    };
    let mut cert = cert;
    for (i, p) in a.input_cert.iter().enumerate() {
        match docs::read_document(p) {
            Ok(v) => cert = cert.input(&format!("certificate.{i}"), &io::content_hash(&v)),
            Err(e) => return docs::fatal(&e),
        }
    }
    if let Some(doc) = &doc {
        cert = cert.input("output", &io::content_hash(doc));
        if let Err(e) = docs::write_document(Some(&a.output), doc) {
            return docs::fatal(&e);
        }
    }
    match docs::write_document(Some(&cert_path), &cert.to_value()) {
        Ok(()) => cert.verdict.exit_code(),
        Err(e) => docs::fatal(&e),
    }
}

fn space_for(a: &ConvertArgs) -> Result<Space> {
    let fallback = a.cover.as_ref().or(a.map.as_ref()).or(a.psi.as_ref());
    match (&a.space, fallback) {
        (Some(p), _) => docs::load_space(p),
        (None, Some(c)) => docs::load_space(&docs::sibling(c, "space")),
        (None, None) => Err(Error::Parameter("--space is required".into())),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parameter(format!("--{flag} is required")))
}

fn alphas(a: &ConvertArgs, default: &str) -> Result<Vec<Q>> {
    a.alpha.as_deref().unwrap_or(default).split(',').map(|s| q::parse(s.trim())).collect()
}

fn cover_value(c: &CoverFamily, space: &Space) -> Value {
    io::cover_doc(c, &space.hash)
}

type Converted = (Option<Value>, Certificate);

fn convert(a: &ConvertArgs) -> Result<Converted> {
    let space = space_for(a)?;
    let window = &space.model.window;
    let base = Certificate::new(a.direction.name(), Verdict::Pass).input("space", &space.hash);
    let cover = || docs::load_cover(docs::required(&a.cover, "cover")?, &space);
    let homotopy = || docs::load_homotopy(docs::required(&a.homotopy, "homotopy")?, &space);
    let load_map = |p: &Path| -> Result<(ccw_core::characterisations::EquivariantMap, String)> {
        let v = docs::read_document(p)?;
        Ok((io::eqmap_from_doc(&v, space.model.clone(), &space.hash, docs::ground_cap())?, io::content_hash(&v)))
    };
    match a.direction {
        Direction::CoverToMap => {
            let c = cover()?;
            let h = homotopy()?;
            let k = need(a.k, "k")?;
            let r = cover_to_map(&c.cover, &h.ha, k)?;
            let doc = io::eqmap_doc(&r.map, &space.hash);
            let ok = r.measured <= r.bound;
            let cert = base
                .input("cover", &c.hash)
                .input("homotopy", &h.hash)
                .param("k", k)
                .radii(window.radius(), Some(r.map.domain_radius))
                .details(json!({
                    "n": r.n,
                    "measured": q::fmt(&r.measured),
                    "bound": q::fmt(&r.bound),
                    "longness_checked": r.longness.checked,
                }))
                .verdict_if(ok);
            Ok((Some(doc), cert))
        }
        Direction::MapToFamilies => {
            let (map, hash) = load_map(docs::required(&a.map, "map")?)?;
            let h = homotopy()?;
            let n = a.n.unwrap_or(map.image_dimension().max(0) as usize);
            let r = need(a.r, "r")?;
            let fams = map_to_disjoint_families(&map, &h.ha, n, r)?;
            let union = fams.union();
            let overlap = fams.overlap();
            let sizes: Vec<usize> = fams.families.iter().map(CoverFamily::len).collect();
            let ok = fams.longness.passed && overlap.is_none();
            let cert = base
                .input("map", &hash)
                .input("homotopy", &h.hash)
                .param("n", n)
                .param("r", r)
                .radii(window.radius(), Some(fams.longness.inner_radius))
                .details(json!({
                    "family_sizes": sizes,
                    "measured": q::fmt(&fams.measured),
                    "measured_subdivided": q::fmt(&fams.measured_subdivided),
                    "required": q::fmt(&fams.required),
                    "estimate_applies": fams.estimate_applies,
                    "r_long": fams.longness.passed,
                    "r_long_witness": fams.longness.witness.map(|p| fams.families[0].ground.name(p)),
                    "overlap": overlap,
                }))
                .verdict_if(ok);
            Ok((Some(cover_value(&union, &space)), cert))
        }
        Direction::PhiPsi => match (&a.map, &a.psi) {
            (Some(p), None) => {
                let (map, hash) = load_map(p)?;
                let psi = phi_to_psi(&map)?;
                let doc = io::psi_doc(&psi, &space.model, &space.hash);
                let mut cert = base.input("map", &hash).radii(window.radius(), Some(map.domain_radius));
                let mut details = json!({ "table_hash": io::content_hash(&doc["table"]) });
                if a.homotopy.is_some() {
                    let h = homotopy()?;
                    details["defect"] = json!(q::fmt(&psi.defect(&h.ha)?));
                    cert = cert.input("homotopy", &h.hash);
                }
                Ok((Some(doc), cert.details(details)))
            }
            (None, Some(p)) => {
                let v = docs::read_document(p)?;
                let psi = io::psi_from_doc(&v, &space.model, &space.hash)?;
                let ground = docs::ground(&space, a.action.into())?;
                let phi = psi_to_phi(&psi, ground)?;
                let doc = io::eqmap_doc(&phi, &space.hash);
                let equivariant = phi.is_equivariant();
                let cert = base
                    .input("psi", &io::content_hash(&v))
                    .radii(window.radius(), Some(phi.domain_radius))
                    .details(json!({ "table_hash": io::content_hash(&doc["table"]), "equivariant": equivariant }))
                    .verdict_if(equivariant != Some(false));
                Ok((Some(doc), cert))
            }
            _ => Err(Error::Parameter("exactly one of --map and --psi is required".into())),
        },
        Direction::CoverToMult => {
            let c = cover()?;
            let d = q::parse(a.d.as_deref().ok_or_else(|| Error::Parameter("--d is required".into()))?)?;
            let (i, m) = cover_to_multiplicity_cover(&c.cover, &d)?;
            let ok = m.covers_inner && m.multiplicity as isize <= m.dimension + 1;
            let cert = base
                .input("cover", &c.hash)
                .param("d", q::fmt(&d))
                .radii(window.radius(), Some(m.inner_radius))
                .details(json!({
                    "dimension": m.dimension,
                    "multiplicity": m.multiplicity,
                    "covers_inner": m.covers_inner,
                }))
                .verdict_if(ok);
            Ok((Some(cover_value(&i, &space)), cert))
        }
        Direction::MultToCover => {
            let c = cover()?;
            let alpha = alphas(a, "1")?.into_iter().next().expect("one radius");
            let n = a.n.unwrap_or(family_dimension(&c.cover).max(0) as usize);
            let (u, p) = multiplicity_to_lebesgue_cover(&c.cover, &alpha, n)?;
            let ok = p.lebesgue.passed && p.dimension <= n as isize;
            let cert = base
                .input("cover", &c.hash)
                .param("alpha", q::fmt(&alpha))
                .param("n", n)
                .radii(p.lebesgue.window_radius, Some(p.lebesgue.inner_radius))
                .details(json!({
                    "dimension": p.dimension,
                    "lebesgue": p.lebesgue.passed,
                    "index_bound": p.index_bound,
                }))
                .verdict_if(ok);
            Ok((Some(cover_value(&u, &space)), cert))
        }
        Direction::BoundaryExtend => {
            let c = cover()?;
            let v = &c.cover;
            let eps = boundary_epsilon(v)?;
            let ext = extend_boundary_cover(v, &eps)?;
            let interior = match &a.interior {
                Some(p) => {
                    let i = docs::load_cover(p, &space)?;
                    CoverFamily::new(ext.cover.ground.clone(), i.cover.members().to_vec())?
                }
                None => fiber_cover(ext.cover.ground.clone(), &space.model.interior_points())?,
            };
            let radii = alphas(a, "2,3")?;
            let asm = assemble_full_cover(&ext.cover, &interior, &radii)?;
            let restriction = restriction_defect(v, &ext.cover);
            let law = intersection_law(v, &eps, 3);
            let eq = extension_equivariance(v, &eps)?;
            let lebesgue: Vec<Value> = asm
                .lebesgue
                .iter()
                .map(|r| json!({ "alpha": q::fmt(&r.alpha), "passed": r.passed, "inner_radius": r.inner_radius }))
                .collect();
            let eps_values: std::collections::BTreeSet<String> = eps.eps.iter().flatten().map(q::fmt).collect();
            let ok = restriction.is_none()
                && law.is_none()
                && eq.mismatches == 0
                && asm.dim <= asm.bound
                && asm.lebesgue.iter().all(|r| r.passed);
            let cert = base
                .input("cover", &c.hash)
                .param("alpha", radii.iter().map(q::fmt).collect::<Vec<_>>())
                .radii(window.radius(), None)
                .details(json!({
                    "dim": asm.dim,
                    "dim_boundary_cover": family_dimension(v),
                    "dim_extension": asm.dim_boundary,
                    "dim_interior": asm.dim_interior,
                    "bound": asm.bound,
                    "ledger": format!("{} + {} + 1", asm.dim_boundary, asm.dim_interior),
                    "restriction_defect": restriction,
                    "intersection_law_violation": law,
                    "equivariance_mismatches": eq.mismatches,
                    "equivariance_checked": eq.checked,
                    "epsilon_values": eps_values,
                    "shortfall": ext.shortfall,
                    "lebesgue": lebesgue,
                }))
                .verdict_if(ok);
            Ok((Some(cover_value(&asm.cover, &space)), cert))
        }
        Direction::RefineEquivariant => {
            let c = cover()?;
            if let Some(g) = &a.group {
                let w = io::window_from_doc(&docs::read_document(g)?)?;
                if w.spec() != window.spec() || w.len() != window.len() {
                    return Err(Error::Document("group window does not match the space".into()));
                }
            }
            let fam = FamilyPredicate::parse(&a.family)
                .ok_or_else(|| Error::Parameter(format!("unknown family {:?}", a.family)))?;
            let model = &space.model;
            let ground = &c.cover.ground;
            let id = window.identity();
            let u: Vec<Vec<usize>> = c
                .cover
                .members()
                .iter()
                .map(|m| (0..model.len()).filter(|&x| m.contains(ground.idx(id, x))).collect())
                .collect();
            for i in 0..c.cover.len() {
                if f_subset_check(&c.cover, i, &fam)?.verdict != FSubsetVerdict::Ok {
                    return Err(Error::Precondition(format!("member {i} is not a {}-subset", fam.name())));
                }
            }
            let quotient = quotient_space(&model.space, window, &model.action)?;
            let projected: Vec<Vec<usize>> = u.iter().map(|m| quotient.project(m)).collect();
            let refinement = min_dim_refinement(quotient.classes.len(), &projected)?;
            let lift = equivariant_lift(&refinement.members, &u, &quotient, window, &model.action)?;
            let out = as_fiber_cover(model.clone(), &lift.members)?;
            let mut bad = Vec::new();
            for i in 0..out.len() {
                let r = f_subset_check(&out, i, &fam)?;
                if r.verdict != FSubsetVerdict::Ok {
                    bad.push(i);
                }
            }
            let dim_lift = point_family_dimension(model.len(), &lift.members);
            let ok = bad.is_empty() && dim_lift <= refinement.dimension;
            let cert = base
                .input("cover", &c.hash)
                .param("family", fam.name())
                .radii(window.radius(), None)
                .details(json!({
                    "quotient_classes": quotient.classes.len(),
                    "refinement_dimension": refinement.dimension,
                    "refinement_optimal": refinement.optimal,
                    "lift_dimension": dim_lift,
                    "choice": lift.choice,
                    "f_subset_failures": bad,
                }))
                .verdict_if(ok);
            Ok((Some(cover_value(&out, &space)), cert))
        }
        Direction::PartitionLu => {
            let c = cover()?;
            let k = need(a.k, "k")?;
            let weights = match &a.weights {
                None => Weights::Auto,
                Some(p) => Weights::Table(weights_from_doc(&docs::read_document(p)?)?),
            };
            let r = partition_lu(&c.cover, k, &weights)?;
            let ok = r.support_ok && r.measured <= r.bound;
            let cert = base
                .input("cover", &c.hash)
                .param("k", k)
                .param("weights", if a.weights.is_some() { "table" } else { "auto" })
                .radii(window.radius(), Some(r.map.domain_radius))
                .details(json!({
                    "n": r.n,
                    "g_lipschitz": q::fmt(&r.g_lipschitz),
                    "measured": q::fmt(&r.measured),
                    "bound": q::fmt(&r.bound),
                    "support_ok": r.support_ok,
                }))
                .verdict_if(ok);
            Ok((Some(io::eqmap_doc(&r.map, &space.hash)), cert))
        }
    }
}

/// `{"schema": "ccw/v1/weights", "rows": [["p/q", ...], ...]}`.
fn weights_from_doc(v: &Value) -> Result<Vec<Vec<Q>>> {
    io::expect_kind(v, "weights")?;
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Document("weights: missing rows".into()))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Document("weights: row is not a list".into()))?
                .iter()
                .map(|x| q::parse(x.as_str().ok_or_else(|| Error::Document("weights: entry is not a string".into()))?))
                .collect()
        })
        .collect()
}
