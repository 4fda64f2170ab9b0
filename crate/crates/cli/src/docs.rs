use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ccw_core::covers::{CoverFamily, Ground, GroundAction, DEFAULT_GROUND_CAP};
use ccw_core::homotopy::HomotopyActionModel;
use ccw_core::io;
use ccw_core::report::{error_exit_code, Certificate, Verdict};
use ccw_core::space::CompactificationModel;
use ccw_core::{Error, Result};
use serde_json::{json, Value};

/// Ground-set cap from `CCW_MAX_GROUND`.
pub fn ground_cap() -> usize {
    std::env::var("CCW_MAX_GROUND")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_GROUND_CAP)
}

pub fn read_document(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
    io::parse_document(&text).map_err(|e| match e {
        Error::Document(m) => Error::Document(format!("{}: {m}", path.display())),
        e => e,
    })
}

/// Writes atomically, or to stdout when no path is given.
pub fn write_document(path: Option<&Path>, v: &Value) -> Result<()> {
    let text = io::canonical(v);
    let Some(path) = path else {
        print!("{text}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let fail = |e: std::io::Error| Error::Document(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

/// `dir/stem-suffix.json` next to `path`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}-{suffix}.json"))
}

pub fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| Error::Parameter(format!("--{flag} is required")))
}

pub struct Space {
    pub model: Arc<CompactificationModel>,
    pub hash: String,
}

pub fn load_space(path: &Path) -> Result<Space> {
    let v = read_document(path)?;
    let model = Arc::new(io::space_from_doc(&v)?);
    Ok(Space {
        model,
        hash: io::content_hash(&v),
    })
}

pub struct Cover {
    pub cover: CoverFamily,
    pub hash: String,
}

pub fn load_cover(path: &Path, space: &Space) -> Result<Cover> {
    let v = read_document(path)?;
    let cover = io::cover_from_doc(&v, space.model.clone(), &space.hash, ground_cap())?;
    Ok(Cover {
        cover,
        hash: io::content_hash(&v),
    })
}

pub struct Homotopy {
    pub ha: HomotopyActionModel,
    pub hash: String,
}

pub fn load_homotopy(path: &Path, space: &Space) -> Result<Homotopy> {
    let v = read_document(path)?;
    let ha = io::homotopy_from_doc(&v, space.model.clone(), &space.hash)?;
    Ok(Homotopy {
        ha,
        hash: io::content_hash(&v),
    })
}

pub fn ground(space: &Space, action: GroundAction) -> Result<Arc<Ground>> {
    Ok(Arc::new(Ground::new(space.model.clone(), action, ground_cap())?))
}

/// Certificate for an error raised after the inputs parsed.
pub fn error_certificate(check: &str, e: &Error) -> Certificate {
    let verdict = if error_exit_code(e) == ccw_core::report::EXIT_INCONCLUSIVE {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    };
    Certificate::new(check, verdict).details(json!({ "error": e.to_string() }))
}

/// Reports a document error on stderr and returns its exit code.
pub fn fatal(e: &Error) -> i32 {
    eprintln!("error: {e}");
    error_exit_code(e)
}
