//! Certificates: the verdict of a check or conversion together with the
//! parameters and the content hashes of every input document.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{expect_kind, SCHEMA_PREFIX};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_DOCUMENT: i32 = 4;

/// Notes attached to every certificate.
pub const STANDARD_NOTES: [&str; 4] = [
    "openness of cover members is not modeled; members are finite subsets of the ground set",
    "results concern the finite window model only",
    "alpha = infinity is modeled as R+1",
    "weak Z-set and contractibility hypotheses are not modeled",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => EXIT_PASS,
            Verdict::Fail => EXIT_FAIL,
            Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub verdict: Verdict,
    pub params: BTreeMap<String, Value>,
    /// Input role -> content hash.
    pub inputs: BTreeMap<String, String>,
    pub details: Value,
    pub window_radius: Option<u32>,
    pub inner_radius: Option<u32>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(check: &str, verdict: Verdict) -> Self {
        Certificate {
            check: check.to_string(),
            verdict,
            params: BTreeMap::new(),
            inputs: BTreeMap::new(),
            details: Value::Null,
            window_radius: None,
            inner_radius: None,
            notes: STANDARD_NOTES.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
        self
    }

    pub fn input(mut self, role: &str, hash: &str) -> Self {
        self.inputs.insert(role.to_string(), hash.to_string());
        self
    }

    pub fn details(mut self, d: Value) -> Self {
        self.details = d;
        self
    }

    pub fn radii(mut self, window: u32, inner: Option<u32>) -> Self {
        self.window_radius = Some(window);
        self.inner_radius = inner;
        self
    }

    pub fn verdict_if(mut self, ok: bool) -> Self {
        self.verdict = Verdict::from_bool(ok);
        self
    }

    pub fn note(mut self, n: &str) -> Self {
        self.notes.push(n.to_string());
        self
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema": format!("{SCHEMA_PREFIX}certificate"),
            "check": self.check,
            "verdict": self.verdict,
            "params": self.params,
            "manifest": { "inputs": self.inputs },
            "details": self.details,
            "window_radius": self.window_radius,
            "inner_radius": self.inner_radius,
            "notes": self.notes,
        })
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        expect_kind(v, "certificate")?;
        let bad = |what: &str| Error::Document(format!("certificate: bad {what}"));
        let get = |k: &str| v.get(k).cloned().unwrap_or(Value::Null);
        let inputs = v
            .get("manifest")
            .and_then(|m| m.get("inputs"))
            .cloned()
            .unwrap_or_else(|| json!({}));
        Ok(Certificate {
            check: get("check").as_str().ok_or_else(|| bad("check"))?.to_string(),
            verdict: serde_json::from_value(get("verdict")).map_err(|_| bad("verdict"))?,
            params: serde_json::from_value(get("params")).map_err(|_| bad("params"))?,
            inputs: serde_json::from_value(inputs).map_err(|_| bad("manifest"))?,
            details: get("details"),
            window_radius: serde_json::from_value(get("window_radius")).map_err(|_| bad("window_radius"))?,
            inner_radius: serde_json::from_value(get("inner_radius")).map_err(|_| bad("inner_radius"))?,
            notes: serde_json::from_value(get("notes")).map_err(|_| bad("notes"))?,
        })
    }

    /// Plain-text summary for humans.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "check:    {}", self.check);
        let _ = writeln!(s, "verdict:  {}", self.verdict.as_str());
        if let Some(r) = self.window_radius {
            let inner = self.inner_radius.map_or("none".to_string(), |i| i.to_string());
            let _ = writeln!(s, "window:   R = {r}, inner radius = {inner}");
        }
        for (k, v) in &self.params {
            let _ = writeln!(s, "param:    {k} = {}", compact(v));
        }
        for (k, h) in &self.inputs {
            let _ = writeln!(s, "input:    {k} {h}");
        }
        if let Value::Object(d) = &self.details {
            for (k, v) in d {
                let text = compact(v);
                if text.len() <= 120 {
                    let _ = writeln!(s, "detail:   {k} = {text}");
                } else {
                    let _ = writeln!(s, "detail:   {k} = ({} bytes)", text.len());
                }
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note:     {n}");
        }
        s
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}

/// Exit code for an error surfaced while evaluating a check.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Document(_) | Error::InvalidSpec(_) => EXIT_DOCUMENT,
        Error::InsufficientDomain(_) | Error::SizeCap { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_FAIL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c = Certificate::new("lebesgue", Verdict::Pass)
            .param("alpha", "4")
            .input("cover", "abc")
            .radii(64, Some(60))
            .details(json!({"witness": null}));
        let back = Certificate::from_value(&c.to_value()).unwrap();
        assert_eq!(c, back);
        assert!(c.summary().contains("verdict:  pass"));
    }
}
