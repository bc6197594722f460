use std::path::Path;
use std::process::Command;

use polyforge_cli::{run, CertificateBundle, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("polyforge").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn bundle(stdout: &str) -> CertificateBundle {
    serde_json::from_str(stdout).expect("stdout is a bundle")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn missing_input_exits_two() {
    let (code, _, err) = invoke(&["hirsch", "diameter", "--complex", "/no/such/file.json"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("cannot read"));
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", "{ not json");
    let (code, _, _) = invoke(&["arr", "betti", "--file", &f]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn unknown_flag_exits_two() {
    let (code, _, _) = invoke(&["cct", "kappa", "--bogus"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("cct"));
}

#[test]
fn kappa_matches_golden() {
    let (code, out, _) = invoke(&["cct", "kappa", "--upto", "10"]);
    assert_eq!(code, EXIT_OK);
    let golden = include_str!("golden/kappa_10.txt");
    assert_eq!(out, golden);
}

#[test]
fn kconfig_verify_passes() {
    let (code, out, _) = invoke(&["proj", "k-config", "--verify"]);
    assert_eq!(code, EXIT_OK);
    let b = bundle(&out);
    assert!(b.pass);
    for name in ["f0", "free_points", "step_six_coplanar", "seed_torus", "infinity_span", "frame_replay"] {
        assert!(b.checks.iter().any(|c| c.name == name && c.pass), "{name}");
    }
    assert_eq!(b.data["points"].as_array().unwrap().len(), 64);
}

#[test]
fn generate_then_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t4.json").display().to_string();
    let (code, out, _) = invoke(&["--out", &file, "cct", "generate", "--n", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let (code, out, _) = invoke(&["cct", "verify", "--file", &file]);
    assert_eq!(code, EXIT_OK, "{out}");
    let b = bundle(&out);
    assert!(b.checks.iter().any(|c| c.name == "stored_certificate" && c.pass));
}

#[test]
fn tampered_torus_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t3.json");
    let f = file.display().to_string();
    assert_eq!(invoke(&["--out", &f, "cct", "generate", "--n", "3"]).0, EXIT_OK);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let x = &mut v["data"]["torus"]["coords"][5][0];
    *x = serde_json::json!("7/3");
    std::fs::write(&file, v.to_string()).unwrap();
    let (code, _, err) = invoke(&["cct", "verify", "--file", &f]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(err.contains("check failed"));
}

#[test]
fn staudt_emits_program() {
    let dir = tempfile::tempdir().unwrap();
    let slp = dir.path().join("slp.json");
    let s = slp.display().to_string();
    let (code, out, _) = invoke(&["proj", "staudt", "--poly", "x^2-2", "--at", "sqrt2", "--emit", &s]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(bundle(&out).data["is_root"], true);
    let prog = polyforge::projective::IncidenceProgram::from_json(&std::fs::read_to_string(&slp).unwrap()).unwrap();
    assert!(prog.well_formed().is_ok());
    assert!(!prog.steps.is_empty());
}

#[test]
fn lawrence_square_with_outside_point() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "pp.json",
        r#"{"ambient_dim":2,"polytope_vertices":[[0,0],[1,0],[0,1],[1,1]],"free_points":[[2,2],["-1","1/3"]]}"#,
    );
    let (code, out, _) = invoke(&["proj", "lawrence", "--config", &f]);
    assert_eq!(code, EXIT_OK, "{out}");
    let b = bundle(&out);
    assert_eq!(b.data["vertices"].as_array().unwrap().len(), 8);
}

#[test]
fn lawrence_rejects_interior_free_point() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "pp.json",
        r#"{"ambient_dim":2,"polytope_vertices":[[0,0],[1,0],[0,1],[1,1]],"free_points":[["1/2","1/3"]]}"#,
    );
    let (code, _, err) = invoke(&["proj", "lawrence", "--config", &f]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(err.contains("all_vertices"));
}

#[test]
fn pcctp_counts() {
    let (code, out, _) = invoke(&["proj", "pcctp", "--n", "5", "--counts"]);
    assert_eq!(code, EXIT_OK);
    let b = bundle(&out);
    assert_eq!(b.data["dim"], 69);
    assert_eq!(b.data["f0"], 12 * 6 + 129);
}

#[test]
fn arrangement_two_lines() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "arr.json",
        r#"{"dim":2,"subspaces":[{"basis":[["0","1"]],"offset":["0","0"]},{"basis":[["1","0"]],"offset":["0","0"]}]}"#,
    );
    let (code, out, _) = invoke(&["arr", "betti", "--file", &f, "--i", "0"]);
    assert_eq!(code, EXIT_OK);
    let b = bundle(&out);
    assert_eq!(b.data["betti"], 4);
    assert_eq!(b.data["reduced_betti"], 3);
}

#[test]
fn hirsch_segment_on_octahedron() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "oct.json",
        r#"{"vertices":6,"facets":[[0,2,4],[0,2,5],[0,3,4],[0,3,5],[1,2,4],[1,2,5],[1,3,4],[1,3,5]]}"#,
    );
    let (code, out, _) = invoke(&["hirsch", "segment", "--complex", &f, "--from", "0,2,4", "--to", "1,3,5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, _, _) = invoke(&["hirsch", "diameter", "--complex", &f]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn morse_collapse_and_validate() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "s3.json", r#"{"vertices":4,"facets":[[0,1,2,3]]}"#);
    let m = dir.path().join("m.json").display().to_string();
    assert_eq!(invoke(&["--seed", "3", "--out", &m, "morse", "collapse", "--complex", &c]).0, EXIT_OK);
    let (code, out, _) = invoke(&["morse", "validate", "--complex", &c, "--matching", &m]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn budget_env_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "s2.json", r#"{"vertices":3,"facets":[[0,1,2]]}"#);
    let bin = env!("CARGO_BIN_EXE_polyforge");
    let status =
        Command::new(bin).args(["morse", "collapse", "--complex", &c]).env("POLYFORGE_BUDGET", "1e6").output().unwrap();
    assert!(status.status.success());
    let status = Command::new(bin)
        .args(["morse", "collapse", "--complex", &c])
        .env("POLYFORGE_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_USAGE));
}
