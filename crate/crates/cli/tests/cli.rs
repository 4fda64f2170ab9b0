use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    /// Runs `ccw` with `@name` arguments resolved inside the directory.
    fn run(&self, args: &[&str]) -> i32 {
        self.run_env(args, &[])
    }

    fn run_env(&self, args: &[&str], env: &[(&str, &str)]) -> i32 {
        let args: Vec<String> = args
            .iter()
            .map(|a| match a.strip_prefix('@') {
                Some(name) => self.path(name).display().to_string(),
                None => a.to_string(),
            })
            .collect();
        let out = Command::new(env!("CARGO_BIN_EXE_ccw"))
            .args(&args)
            .envs(env.iter().copied())
            .current_dir(self.0.path())
            .output()
            .unwrap();
        out.status.code().unwrap()
    }

    fn json(&self, name: &str) -> Value {
        read(&self.path(name))
    }
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn lebesgue_certificates_and_exit_codes() {
    let d = Dir::new();
    assert_eq!(d.run(&["generate", "brick-cover", "--R", "64", "--L", "16", "-o", "@b.json"]), 0);
    assert_eq!(d.run(&["check", "lebesgue", "--cover", "@b.json", "--alpha", "4", "-o", "@c.json"]), 0);
    let c = d.json("c.json");
    assert_eq!(c["schema"], "ccw/v1/certificate");
    assert_eq!(c["verdict"], "pass");
    assert_eq!(c["params"]["alpha"], "4/1");
    assert_eq!(c["window_radius"], 64);
    assert_eq!(d.run(&["check", "lebesgue", "--cover", "@b.json", "--alpha", "40", "-o", "@f.json"]), 2);
    assert_eq!(d.json("f.json")["verdict"], "fail");
    assert!(d.json("f.json")["details"]["witness"].is_string());
    // empty inner window
    assert_eq!(d.run(&["check", "lebesgue", "--cover", "@b.json", "--alpha", "70", "-o", "@i.json"]), 3);
    assert_eq!(d.json("i.json")["verdict"], "inconclusive");
}

#[test]
fn document_errors_exit_with_four() {
    let d = Dir::new();
    assert_eq!(d.run(&["generate", "interval", "--R", "8", "-o", "@s.json"]), 0);
    std::fs::write(d.path("bad.json"), "{nope").unwrap();
    assert_eq!(d.run(&["check", "dimension", "--cover", "@bad.json", "--space", "@s.json"]), 4);
    std::fs::write(d.path("wrong.json"), r#"{"schema": "ccw/v1/weights", "rows": []}"#).unwrap();
    assert_eq!(d.run(&["check", "dimension", "--cover", "@wrong.json", "--space", "@s.json"]), 4);
    assert_eq!(d.run(&["check", "dimension", "--cover", "@missing.json", "--space", "@s.json"]), 4);
    assert_eq!(d.run(&["report", "@bad.json"]), 4);
}

#[test]
fn full_cover_is_a_vcyc_cover() {
    let d = Dir::new();
    assert_eq!(d.run(&["generate", "interval", "--R", "16", "-o", "@s.json"]), 0);
    assert_eq!(d.run(&["generate", "full-cover", "--space", "@s.json", "-o", "@f.json"]), 0);
    let code = d.run(&["check", "f-subset", "--cover", "@f.json", "--space", "@s.json", "--family", "vcyc", "-o", "@c.json"]);
    assert_eq!(code, 0);
    assert_eq!(d.run(&["check", "dimension", "--cover", "@f.json", "--space", "@s.json", "-o", "@dim.json"]), 0);
    assert_eq!(d.run(&["report", "@c.json"]), 0);
}

#[test]
fn ground_cap_is_read_from_the_environment() {
    let d = Dir::new();
    assert_eq!(d.run(&["generate", "brick-cover", "--R", "16", "--L", "8", "-o", "@b.json"]), 0);
    let code = d.run_env(&["check", "dimension", "--cover", "@b.json"], &[("CCW_MAX_GROUND", "10")]);
    assert_ne!(code, 0);
    assert_eq!(d.run_env(&["check", "dimension", "--cover", "@b.json"], &[("CCW_MAX_GROUND", "100000")]), 0);
}

#[test]
fn cover_to_map_records_the_bound() {
    let d = Dir::new();
    assert_eq!(d.run(&["generate", "brick-cover", "--R", "118", "--L", "48", "-o", "@b.json"]), 0);
    assert_eq!(d.run(&["generate", "homotopy", "--space", "@b-space.json", "-o", "@h.json"]), 0);
    let code = d.run(&["convert", "cover-to-map", "--cover", "@b.json", "--homotopy", "@h.json", "--k", "11", "-o", "@m.json"]);
    assert_eq!(code, 0);
    let cert = d.json("m-cert.json");
    assert_eq!(cert["details"]["bound"], "1/2");
    assert_eq!(cert["details"]["n"], 1);
    assert_eq!(cert["params"]["k"], 11);
    assert_eq!(d.json("m.json")["schema"], "ccw/v1/eqmap");
}

#[test]
fn boundary_extension_of_tree_cylinders() {
    let d = Dir::new();
    assert_eq!(d.run(&["generate", "tree", "--k", "2", "--depth", "3", "--R", "3", "-o", "@t.json"]), 0);
    assert_eq!(d.run(&["generate", "cylinder-cover", "--space", "@t.json", "--level", "2", "-o", "@v.json"]), 0);
    let code = d.run(&["convert", "boundary-extend", "--cover", "@v.json", "--space", "@t.json", "--action", "translation", "-o", "@u.json"]);
    assert_eq!(code, 0);
    let cert = d.json("u-cert.json");
    assert_eq!(cert["details"]["ledger"], "0 + 0 + 1");
    assert_eq!(cert["details"]["equivariance_mismatches"], 0);
    assert!(cert["details"]["restriction_defect"].is_null());
}

#[test]
fn phi_psi_round_trip_keeps_the_table() {
    let d = Dir::new();
    assert_eq!(d.run(&["generate", "regular", "--group", "c6", "--R", "3", "-o", "@r.json"]), 0);
    assert_eq!(d.run(&["generate", "equivariant-family", "--space", "@r.json", "--seed", "3", "-o", "@u.json"]), 0);
    assert_eq!(d.run(&["convert", "partition-lu", "--cover", "@u.json", "--space", "@r.json", "--k", "1", "-o", "@p.json"]), 0);
    assert_eq!(d.run(&["convert", "phi-psi", "--map", "@p.json", "--space", "@r.json", "-o", "@psi.json"]), 0);
    assert_eq!(d.run(&["convert", "phi-psi", "--psi", "@psi.json", "--space", "@r.json", "-o", "@phi.json"]), 0);
    assert_eq!(d.run(&["convert", "phi-psi", "--map", "@phi.json", "--space", "@r.json", "-o", "@psi2.json"]), 0);
    assert_eq!(d.json("phi-cert.json")["details"]["equivariant"], true);
    assert_eq!(d.json("psi-cert.json")["details"]["table_hash"], d.json("psi2-cert.json")["details"]["table_hash"]);
    // the rebuilt map extends the original to the whole window
    let (p, phi) = (d.json("p.json"), d.json("phi.json"));
    for (key, value) in p["table"].as_object().unwrap() {
        assert_eq!(&phi["table"][key], value);
    }
}

#[test]
fn refine_equivariant_on_a_regular_model() {
    let d = Dir::new();
    assert_eq!(d.run(&["generate", "coset-space", "--group", "s3", "--R", "3", "--seed", "5", "-o", "@y.json"]), 0);
    assert_eq!(d.run(&["generate", "equivariant-family", "--space", "@y.json", "--seed", "5", "-o", "@u.json"]), 0);
    let code = d.run(&["convert", "refine-equivariant", "--cover", "@u.json", "--space", "@y.json", "--group", "@y-window.json", "-o", "@w.json"]);
    assert_eq!(code, 0);
    let cert = d.json("w-cert.json");
    assert_eq!(cert["details"]["lift_dimension"], 0);
    assert_eq!(cert["details"]["f_subset_failures"], Value::Array(vec![]));
}

#[test]
fn certificates_chain_their_inputs() {
    let d = Dir::new();
    assert_eq!(d.run(&["generate", "brick-cover", "--R", "20", "--L", "8", "-o", "@b.json"]), 0);
    assert_eq!(d.run(&["check", "lebesgue", "--cover", "@b.json", "--alpha", "2", "-o", "@c.json"]), 0);
    let code = d.run(&["convert", "cover-to-mult", "--cover", "@b.json", "--d", "2", "--input-cert", "@c.json", "-o", "@m.json"]);
    assert_eq!(code, 0);
    let inputs = &d.json("m-cert.json")["manifest"]["inputs"];
    assert!(inputs["certificate.0"].is_string());
    assert_eq!(inputs["cover"], d.json("c.json")["manifest"]["inputs"]["cover"]);
}
