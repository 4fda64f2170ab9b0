//! JSON documents. Every document carries `"schema": "ccw/v1/<kind>"`;
//! keys are sorted and rationals are written as `"p/q"` in lowest terms, so
//! equal payloads serialize to equal bytes.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::characterisations::{AlmostEquivariantMap, EquivariantMap};
use crate::covers::{equivariance_check, CoverFamily, Ground, GroundAction};
use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupWindow};
use crate::homotopy::{HomotopyActionModel, PMap};
use crate::q::{self, Q};
use crate::space::{CompactificationModel, FiniteMetricSpace, L1Point, PartialAction, SimplicialComplex, VertexAction};

pub const SCHEMA_PREFIX: &str = "ccw/v1/";

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

/// Pretty, key-sorted rendering with a trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// SHA-256 of the compact key-sorted serialization, hex encoded.
pub fn content_hash(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("serializable");
    hex::encode(Sha256::digest(&bytes))
}

pub fn parse_document(text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| doc_err(format!("malformed JSON: {e}")))?;
    kind_of(&v)?;
    Ok(v)
}

pub fn kind_of(v: &Value) -> Result<&str> {
    let s = v
        .get("schema")
        .and_then(Value::as_str)
        .ok_or_else(|| doc_err("missing schema"))?;
    s.strip_prefix(SCHEMA_PREFIX)
        .ok_or_else(|| doc_err(format!("unknown schema {s:?}")))
}

pub fn expect_kind(v: &Value, kind: &str) -> Result<()> {
    let k = kind_of(v)?;
    if k != kind {
        return Err(doc_err(format!("expected a {kind} document, got {k}")));
    }
    Ok(())
}

fn schema(kind: &str) -> Value {
    Value::String(format!("{SCHEMA_PREFIX}{kind}"))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| doc_err(format!("missing field {key:?}")))
}

fn str_list(v: &Value, key: &str) -> Result<Vec<String>> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| doc_err(format!("{key:?} is not a list")))?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| doc_err(format!("{key:?} holds a non-string"))))
        .collect()
}

fn q_value(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => q::parse(s),
        Value::Number(n) => n.as_i64().map(q::int).ok_or_else(|| doc_err("non-integer number")),
        _ => Err(doc_err("expected a rational")),
    }
}

fn index_by_name(names: &[String]) -> HashMap<&str, usize> {
    names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}

fn lookup(map: &HashMap<&str, usize>, name: &str, what: &str) -> Result<usize> {
    map.get(name).copied().ok_or_else(|| doc_err(format!("unknown {what} {name:?}")))
}

// ---------------------------------------------------------------- windows

pub fn window_doc(w: &GroupWindow) -> Value {
    json!({
        "schema": schema("group_window"),
        "spec": w.spec(),
        "radius": w.radius(),
        "elements": (0..w.len()).map(|g| w.name(g)).collect::<Vec<_>>(),
    })
}

fn window_header(w: &GroupWindow) -> Value {
    json!({ "spec": w.spec(), "radius": w.radius() })
}

fn window_from_header(v: &Value) -> Result<GroupWindow> {
    let spec: GroupSpec = serde_json::from_value(field(v, "spec")?.clone()).map_err(|e| doc_err(format!("bad group spec: {e}")))?;
    let radius = field(v, "radius")?.as_u64().ok_or_else(|| doc_err("bad radius"))?;
    GroupWindow::build(&spec, radius as u32)
}

pub fn window_from_doc(v: &Value) -> Result<GroupWindow> {
    expect_kind(v, "group_window")?;
    let w = window_from_header(v)?;
    if let Some(list) = v.get("elements") {
        let names: Vec<String> = (0..w.len()).map(|g| w.name(g)).collect();
        if *list != json!(names) {
            return Err(doc_err("element list does not match the rebuilt window"));
        }
    }
    Ok(w)
}

fn window_names(w: &GroupWindow) -> Vec<String> {
    (0..w.len()).map(|g| w.name(g)).collect()
}

// ----------------------------------------------------------------- spaces

pub fn space_doc(m: &CompactificationModel) -> Value {
    let w = &m.window;
    let sp = &m.space;
    let mut action = Map::new();
    for g in 0..w.len() {
        let mut row = Map::new();
        for x in 0..sp.len() {
            if let Some(y) = m.action.apply(g, x) {
                row.insert(sp.name(x).to_string(), Value::String(sp.name(y).to_string()));
            }
        }
        action.insert(w.name(g), Value::Object(row));
    }
    json!({
        "schema": schema("space"),
        "window": window_header(w),
        "points": sp.names(),
        "metric": sp.upper_triangle().iter().map(q::fmt).collect::<Vec<_>>(),
        "boundary": m.boundary_points().into_iter().map(|x| sp.name(x).to_string()).collect::<Vec<_>>(),
        "action": action,
    })
}

pub fn space_from_doc(v: &Value) -> Result<CompactificationModel> {
    expect_kind(v, "space")?;
    let window = Arc::new(window_from_header(field(v, "window")?)?);
    let names = str_list(v, "points")?;
    let metric: Vec<Q> = field(v, "metric")?
        .as_array()
        .ok_or_else(|| doc_err("metric is not a list"))?
        .iter()
        .map(q_value)
        .collect::<Result<_>>()?;
    let space = FiniteMetricSpace::from_upper_triangle(names.clone(), &metric)?;
    let pidx = index_by_name(&names);
    let mut boundary = vec![false; names.len()];
    for b in str_list(v, "boundary")? {
        boundary[lookup(&pidx, &b, "point")?] = true;
    }
    let gnames = window_names(&window);
    let gidx = index_by_name(&gnames);
    let act = field(v, "action")?.as_object().ok_or_else(|| doc_err("action is not an object"))?;
    let mut maps = vec![vec![None; names.len()]; window.len()];
    for (g, row) in act {
        let g = lookup(&gidx, g, "group element")?;
        for (x, y) in row.as_object().ok_or_else(|| doc_err("action row is not an object"))? {
            let x = lookup(&pidx, x, "point")?;
            let y = lookup(&pidx, y.as_str().ok_or_else(|| doc_err("action value"))?, "point")?;
            maps[g][x] = Some(y);
        }
    }
    let action = PartialAction::from_fn(window.len(), names.len(), |g, x| maps[g][x]);
    CompactificationModel::new(window, space, boundary, action)
}

// ----------------------------------------------------------------- covers

pub fn cover_doc(c: &CoverFamily, space_hash: &str) -> Value {
    let ground = &c.ground;
    let w = ground.window();
    let sp = &ground.model.space;
    let members: Vec<Vec<[String; 2]>> = c
        .members()
        .iter()
        .map(|m| {
            m.ones()
                .map(|p| {
                    let (g, x) = ground.split(p);
                    [w.name(g), sp.name(x).to_string()]
                })
                .collect()
        })
        .collect();
    let orbits = equivariance_check(c).orbits;
    json!({
        "schema": schema("cover"),
        "space_ref": space_hash,
        "action": ground.action,
        "members": members,
        "orbits": orbits,
    })
}

pub fn ground_action_of(v: &Value) -> Result<GroundAction> {
    serde_json::from_value(field(v, "action")?.clone()).map_err(|e| doc_err(format!("bad ground action: {e}")))
}

/// Rebuilds a cover over `model`; `space_hash` must match the reference.
pub fn cover_from_doc(v: &Value, model: Arc<CompactificationModel>, space_hash: &str, cap: usize) -> Result<CoverFamily> {
    expect_kind(v, "cover")?;
    check_ref(v, "space_ref", space_hash)?;
    let action = ground_action_of(v)?;
    let ground = Arc::new(Ground::new(model, action, cap)?);
    let gnames = window_names(ground.window());
    let gidx = index_by_name(&gnames);
    let pidx = index_by_name(ground.model.space.names());
    let mut members = Vec::new();
    for m in field(v, "members")?.as_array().ok_or_else(|| doc_err("members is not a list"))? {
        let mut set = ground.empty_set();
        for pair in m.as_array().ok_or_else(|| doc_err("member is not a list"))? {
            let (g, x) = match pair.as_array().map(Vec::as_slice) {
                Some([g, x]) => (g.as_str(), x.as_str()),
                _ => return Err(doc_err("ground point is not a pair")),
            };
            let g = lookup(&gidx, g.ok_or_else(|| doc_err("element name"))?, "group element")?;
            let x = lookup(&pidx, x.ok_or_else(|| doc_err("point name"))?, "point")?;
            set.insert(ground.idx(g, x));
        }
        members.push(set);
    }
    CoverFamily::new(ground, members)
}

fn check_ref(v: &Value, key: &str, hash: &str) -> Result<()> {
    let r = field(v, key)?.as_str().ok_or_else(|| doc_err(format!("{key} is not a string")))?;
    if r != hash {
        return Err(doc_err(format!("{key} {r} does not match the supplied document {hash}")));
    }
    Ok(())
}

// ------------------------------------------------------- homotopy actions

fn pmap_doc(m: &PMap, sp: &FiniteMetricSpace) -> Value {
    let mut row = Map::new();
    for (x, y) in m.iter().enumerate() {
        if let Some(y) = y {
            row.insert(sp.name(x).to_string(), Value::String(sp.name(*y as usize).to_string()));
        }
    }
    Value::Object(row)
}

fn pmap_from(v: &Value, pidx: &HashMap<&str, usize>, n: usize) -> Result<PMap> {
    let mut m = vec![None; n];
    for (x, y) in v.as_object().ok_or_else(|| doc_err("map is not an object"))? {
        let x = lookup(pidx, x, "point")?;
        let y = lookup(pidx, y.as_str().ok_or_else(|| doc_err("map value"))?, "point")?;
        m[x] = Some(y as u32);
    }
    Ok(m)
}

pub fn homotopy_doc(ha: &HomotopyActionModel, space_hash: &str) -> Value {
    let w = ha.window();
    let sp = &ha.model.space;
    let mut phi = Map::new();
    for &s in ha.s() {
        phi.insert(w.name(s), pmap_doc(ha.phi(s).expect("phi on S"), sp));
    }
    let mut h = Map::new();
    for (&(a, b), maps) in ha.homotopies() {
        h.insert(
            format!("{}|{}", w.name(a), w.name(b)),
            Value::Array(maps.iter().map(|m| pmap_doc(m, sp)).collect()),
        );
    }
    json!({
        "schema": schema("homotopy_action"),
        "space_ref": space_hash,
        "S": ha.s().iter().map(|&s| w.name(s)).collect::<Vec<_>>(),
        "phi": phi,
        "H": h,
        "time_grid": ha.time_grid().iter().map(q::fmt).collect::<Vec<_>>(),
    })
}

pub fn homotopy_from_doc(v: &Value, model: Arc<CompactificationModel>, space_hash: &str) -> Result<HomotopyActionModel> {
    expect_kind(v, "homotopy_action")?;
    check_ref(v, "space_ref", space_hash)?;
    let w = model.window.clone();
    let gnames = window_names(&w);
    let gidx = index_by_name(&gnames);
    let pidx = index_by_name(model.space.names());
    let n = model.len();
    let s: Vec<usize> = str_list(v, "S")?
        .iter()
        .map(|s| lookup(&gidx, s, "group element"))
        .collect::<Result<_>>()?;
    let mut phi = BTreeMap::new();
    for (g, m) in field(v, "phi")?.as_object().ok_or_else(|| doc_err("phi is not an object"))? {
        phi.insert(lookup(&gidx, g, "group element")?, pmap_from(m, &pidx, n)?);
    }
    let mut h = BTreeMap::new();
    for (key, maps) in field(v, "H")?.as_object().ok_or_else(|| doc_err("H is not an object"))? {
        let (a, b) = key.split_once('|').ok_or_else(|| doc_err(format!("bad H key {key:?}")))?;
        let maps = maps
            .as_array()
            .ok_or_else(|| doc_err("H entry is not a list"))?
            .iter()
            .map(|m| pmap_from(m, &pidx, n))
            .collect::<Result<Vec<_>>>()?;
        h.insert((lookup(&gidx, a, "group element")?, lookup(&gidx, b, "group element")?), maps);
    }
    let grid = field(v, "time_grid")?
        .as_array()
        .ok_or_else(|| doc_err("time_grid is not a list"))?
        .iter()
        .map(q_value)
        .collect::<Result<_>>()?;
    HomotopyActionModel::new(model, s, phi, h, grid)
}

// -------------------------------------------------------------- complexes

pub fn complex_doc(k: &SimplicialComplex, w: &GroupWindow) -> Value {
    let maximal: Vec<Vec<&str>> = k
        .maximal_simplices()
        .iter()
        .map(|s| s.iter().map(|&v| k.vertex_name(v)).collect())
        .collect();
    let action = k.action().map(|a| {
        let mut out = Map::new();
        for g in 0..w.len() {
            let mut row = Map::new();
            for v in 0..k.num_vertices() {
                if let Some(u) = a.apply(g, v) {
                    row.insert(k.vertex_name(v).to_string(), Value::String(k.vertex_name(u).to_string()));
                }
            }
            out.insert(w.name(g), Value::Object(row));
        }
        Value::Object(out)
    });
    json!({
        "schema": schema("complex"),
        "window": window_header(w),
        "vertices": k.names(),
        "maximal_simplices": maximal,
        "action": action,
    })
}

pub fn complex_from_doc(v: &Value) -> Result<(SimplicialComplex, GroupWindow)> {
    expect_kind(v, "complex")?;
    let w = window_from_header(field(v, "window")?)?;
    let names = str_list(v, "vertices")?;
    let vidx = index_by_name(&names);
    let maximal: Vec<Vec<usize>> = field(v, "maximal_simplices")?
        .as_array()
        .ok_or_else(|| doc_err("maximal_simplices is not a list"))?
        .iter()
        .map(|s| {
            s.as_array()
                .ok_or_else(|| doc_err("simplex is not a list"))?
                .iter()
                .map(|v| lookup(&vidx, v.as_str().unwrap_or(""), "vertex"))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut k = SimplicialComplex::from_maximal(names.clone(), &maximal)?;
    if let Some(Value::Object(act)) = v.get("action") {
        let gnames = window_names(&w);
        let gidx = index_by_name(&gnames);
        let mut maps = vec![vec![None; names.len()]; w.len()];
        for (g, row) in act {
            let g = lookup(&gidx, g, "group element")?;
            for (a, b) in row.as_object().ok_or_else(|| doc_err("action row"))? {
                maps[g][lookup(&vidx, a, "vertex")?] = Some(lookup(&vidx, b.as_str().unwrap_or(""), "vertex")?);
            }
        }
        k = k.with_action(VertexAction::from_fn(w.len(), names.len(), |g, v| maps[g][v]))?;
    }
    Ok((k, w))
}

// ------------------------------------------------------------------- maps

fn l1_doc(p: &L1Point, k: &SimplicialComplex) -> Value {
    let mut m = Map::new();
    for (v, c) in p.coords() {
        m.insert(k.vertex_name(*v).to_string(), Value::String(q::fmt(c)));
    }
    Value::Object(m)
}

fn l1_from(v: &Value, vidx: &HashMap<&str, usize>) -> Result<L1Point> {
    let pairs = v
        .as_object()
        .ok_or_else(|| doc_err("point is not an object"))?
        .iter()
        .map(|(name, c)| Ok((lookup(vidx, name, "vertex")?, q_value(c)?)))
        .collect::<Result<Vec<_>>>()?;
    L1Point::from_pairs(pairs)
}

/// `{complex, complex_ref, space_ref, domain_radius, table: {"g|x": point}}`.
pub fn eqmap_doc(map: &EquivariantMap, space_hash: &str) -> Value {
    let ground = &map.ground;
    let w = ground.window();
    let sp = &ground.model.space;
    let complex = complex_doc(&map.complex, w);
    let mut table = Map::new();
    for (p, val) in map.table.iter().enumerate() {
        if let Some(val) = val {
            let (g, x) = ground.split(p);
            table.insert(format!("{}|{}", w.name(g), sp.name(x)), l1_doc(val, &map.complex));
        }
    }
    json!({
        "schema": schema("eqmap"),
        "space_ref": space_hash,
        "action": ground.action,
        "complex_ref": content_hash(&complex),
        "complex": complex,
        "domain_radius": map.domain_radius,
        "table": table,
    })
}

pub fn eqmap_from_doc(v: &Value, model: Arc<CompactificationModel>, space_hash: &str, cap: usize) -> Result<EquivariantMap> {
    expect_kind(v, "eqmap")?;
    check_ref(v, "space_ref", space_hash)?;
    let complex_v = field(v, "complex")?;
    check_ref(v, "complex_ref", &content_hash(complex_v))?;
    let (k, _) = complex_from_doc(complex_v)?;
    let ground = Arc::new(Ground::new(model, ground_action_of(v)?, cap)?);
    let gnames = window_names(ground.window());
    let gidx = index_by_name(&gnames);
    let pidx = index_by_name(ground.model.space.names());
    let vidx = index_by_name(k.names());
    let mut table = vec![None; ground.size()];
    for (key, val) in field(v, "table")?.as_object().ok_or_else(|| doc_err("table is not an object"))? {
        let (g, x) = key.split_once('|').ok_or_else(|| doc_err(format!("bad table key {key:?}")))?;
        let p = ground.idx(lookup(&gidx, g, "group element")?, lookup(&pidx, x, "point")?);
        table[p] = Some(l1_from(val, &vidx)?);
    }
    let domain_radius = field(v, "domain_radius")?.as_u64().ok_or_else(|| doc_err("bad domain_radius"))? as u32;
    Ok(EquivariantMap {
        ground,
        complex: Arc::new(k),
        domain_radius,
        table,
    })
}

/// `{complex, complex_ref, space_ref, table: {x: point}}`.
pub fn psi_doc(psi: &AlmostEquivariantMap, model: &CompactificationModel, space_hash: &str) -> Value {
    let complex = complex_doc(&psi.complex, &model.window);
    let mut table = Map::new();
    for (x, val) in psi.table.iter().enumerate() {
        table.insert(model.space.name(x).to_string(), l1_doc(val, &psi.complex));
    }
    json!({
        "schema": schema("psimap"),
        "space_ref": space_hash,
        "complex_ref": content_hash(&complex),
        "complex": complex,
        "table": table,
    })
}

pub fn psi_from_doc(v: &Value, model: &CompactificationModel, space_hash: &str) -> Result<AlmostEquivariantMap> {
    expect_kind(v, "psimap")?;
    check_ref(v, "space_ref", space_hash)?;
    let complex_v = field(v, "complex")?;
    check_ref(v, "complex_ref", &content_hash(complex_v))?;
    let (k, _) = complex_from_doc(complex_v)?;
    let vidx = index_by_name(k.names());
    let pidx = index_by_name(model.space.names());
    let mut table = vec![None; model.len()];
    for (x, val) in field(v, "table")?.as_object().ok_or_else(|| doc_err("table is not an object"))? {
        table[lookup(&pidx, x, "point")?] = Some(l1_from(val, &vidx)?);
    }
    let table = table
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| doc_err("psi table misses a point"))?;
    Ok(AlmostEquivariantMap {
        complex: Arc::new(k),
        table,
    })
}
