use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dyson-gap"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const DIAG: &str = r#"{"terms":[{"i":[1,0],"n":"1","d":"1"},{"i":[0,1],"n":"-1","d":"1"}],"bidegree":[1,1]}"#;

#[test]
fn dyson_diagonal_is_sharp() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "diag.json", DIAG);
    let p = write(dir.path(), "pts3.json", r#"[["0","0"],["1","1"],["2","2"]]"#);
    let out = run(&["dyson", "--divisor", f.to_str().unwrap(), "--points", p.to_str().unwrap(), "--weight", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["schema"], "dyson-gap/1");
    assert_eq!(v["report"]["lhs"], "3/2");
    assert_eq!(v["report"]["rhs"], "3/2");
}

#[test]
fn strip_on_fiber_product() {
    let dir = tempfile::tempdir().unwrap();
    // x (x - y): one fiber through the origin
    let f = write(
        dir.path(),
        "f.json",
        r#"{"terms":[{"i":[2,0],"n":"1","d":"1"},{"i":[1,1],"n":"-1","d":"1"}],"bidegree":[2,1]}"#,
    );
    let p = write(dir.path(), "p.json", r#"{"points":[["0","0"],["1","1"]]}"#);
    let out = run(&["strip", "--divisor", f.to_str().unwrap(), "--points", p.to_str().unwrap(), "--weight", "2,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(&out);
    assert_eq!(v["command"], "strip");
    assert!(!v["report"]["identities"].as_array().unwrap().is_empty());
}

#[test]
fn pipeline_example_passes_every_stage() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "two.json", r#"[["0","0"],["1","1"]]"#);
    let out = run(&["pipeline", "--g", "2", "--bidegree", "8,8", "--points", p.to_str().unwrap(), "--tau", "1/2", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(&out);
    for stage in ["siegel", "dyson", "lemma61"] {
        assert_eq!(v["report"]["stages"][stage], true, "{stage}");
    }
}

#[test]
fn siegel_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "two.json", r#"[["0","0"],["1","1"]]"#);
    let sol = dir.path().join("sol.json");
    let pts = p.to_str().unwrap();
    let out = run(&["siegel", "--bidegree", "4,3", "--points", pts, "--tau", "3/4", "--out", sol.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = run(&["verify", "--poly", sol.to_str().unwrap(), "--bidegree", "4,3", "--points", pts, "--tau", "3/4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["report"]["verification"]["valid"], true);
    // the zero polynomial is rejected
    let z = write(dir.path(), "zero.json", r#"{"terms":[]}"#);
    let out = run(&["verify", "--poly", z.to_str().unwrap(), "--bidegree", "4,3", "--points", pts, "--tau", "3/4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_file_is_input_error() {
    let out = run(&["index", "--poly", "/nonexistent/poly.json", "--point", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(e["error"].as_str().unwrap().contains("cannot read"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", "{\"terms\": [\n  {\"i\": [1, 0],\n");
    let out = run(&["index", "--poly", f.to_str().unwrap(), "--point", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "{err}");
}

#[test]
fn lemma61_precondition_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "p.json",
        r#"{"g":2,"delta1":"1","delta2":"1","d":100,"e1":3,"e2":1,"normsq1":"1","normsq2":"1"}"#,
    );
    let out = run(&["lemma61", "--params", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let ok = write(
        dir.path(),
        "ok.json",
        r#"{"g":2,"delta1":"10","delta2":"21/100","d":100,"e1":3,"e2":1,"normsq1":"1","normsq2":"1000/21"}"#,
    );
    let out = run(&["gap", "lemma61", "--params", ok.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn vojta_exit_follows_predicate() {
    let dir = tempfile::tempdir().unwrap();
    let l = write(
        dir.path(),
        "l.json",
        r#"{"gram":[["2","1"],["1","2"]],"points":{"P":["1","0"],"R":["1","1"],"T":["3","1"]}}"#,
    );
    let l = l.to_str().unwrap();
    // cos^2(P,R) = 3/4 > 9/16
    let out = run(&["vojta", "--gram", l, "--pair", "P,R"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["report"]["cos_sq"], "3/4");
    let out = run(&["vojta", "--gram", l, "--pair", "P,9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_thresholds() {
    let out = run(&["chain", "--g", "2", "--c0", "1/50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["report"]["thresholds"]["lambda"], "1/6912");
    assert_eq!(v["report"]["thresholds"]["condition1_rhs"], "1/144");
}

#[test]
fn vcurve_values() {
    let out = run(&["vcurve", "--step", "1/2", "--upto", "2"]);
    let v = report(&out);
    let vs: Vec<&str> = v["report"]["table"].as_array().unwrap().iter().map(|r| r["v"].as_str().unwrap()).collect();
    assert_eq!(vs, ["0/1", "1/8", "1/2", "7/8", "1/1"]);
}

#[test]
fn corpus_is_deterministic_across_thread_counts() {
    for kind in ["dyson", "siegel", "lemma61"] {
        let args = ["corpus", "--kind", kind, "--seed", "11", "--n", "60", "--full"];
        let a = bin().args(args).env("DYSON_GAP_THREADS", "1").output().unwrap();
        let b = bin().args(args).env("DYSON_GAP_THREADS", "4").output().unwrap();
        let c = bin().args(args).output().unwrap();
        assert_eq!(a.status.code(), Some(0), "{kind}");
        assert_eq!(a.stdout, b.stdout, "{kind}");
        assert_eq!(a.stdout, c.stdout, "{kind}");
    }
}
