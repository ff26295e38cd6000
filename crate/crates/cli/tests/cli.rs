use std::path::PathBuf;
use std::process::{Command, Output};

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(args: &[&str], cache: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eostrata"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("EOSTRATA_CACHE_DIR", dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.split("\n\n").next().unwrap().lines().skip(1).collect()
}

#[test]
fn siegel_two_has_four_strata_in_a_chain() {
    let path = spec("siegel2.json");
    let out = run(&["eo", "--hasse", path.to_str().unwrap()], None);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(data_rows(&text).len(), 4);
    let edges: Vec<&str> = text.split("\n\n").nth(1).unwrap().lines().skip(1).collect();
    assert_eq!(edges.len(), 3);
}

#[test]
fn gl2_with_empty_type_has_two_rows() {
    let path = spec("gl2.json");
    let out = run(&["eo", path.to_str().unwrap()], None);
    assert_eq!(data_rows(&stdout(&out)).len(), 2);
}

#[test]
fn newton_row_counts() {
    for (name, rows) in [("gl4_2.json", 5), ("siegel2.json", 3), ("gl2.json", 2)] {
        let path = spec(name);
        let out = run(&["newton", path.to_str().unwrap()], None);
        assert!(out.status.success(), "{name}");
        assert_eq!(data_rows(&stdout(&out)).len(), rows, "{name}");
    }
}

#[test]
fn map_basic_row_is_identity() {
    let path = spec("siegel2.json");
    let out = run(&["map", path.to_str().unwrap()], None);
    assert!(out.status.success());
    let text = stdout(&out);
    let basic = data_rows(&text)[0];
    assert!(basic.starts_with("\"(1/2,1/2,1/2,1/2)"), "{basic}");
    assert!(basic.contains("\"[1,2,3,4]\",0"), "{basic}");
}

#[test]
fn map_refuses_non_split_groups() {
    let path = spec("hilbert_blumenthal6.json");
    let out = run(&["map", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_passes_on_siegel_two() {
    let path = spec("siegel2.json");
    let out = run(&["verify", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"factors\": [\n  {\"kind\": \"GL\", \"n\": 2,}\n]}").unwrap();
    let out = run(&["eo", bad.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");

    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["eo", missing.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn non_dominant_mu_is_a_spec_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    std::fs::write(&f, r#"{"factors": [{"kind": "GL", "n": 2, "copies": 1}], "kappa_degree": 1, "mu": [[0, 1]]}"#).unwrap();
    assert_eq!(run(&["newton", f.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn cache_is_transparent_and_keyed_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = spec("gl4_2.json");
    let p = path.to_str().unwrap();
    let fresh = stdout(&run(&["eo", "--format", "json", p], None));
    let miss = stdout(&run(&["eo", "--format", "json", p], Some(dir.path())));
    let hit = stdout(&run(&["eo", "--format", "json", p], Some(dir.path())));
    assert_eq!(fresh, miss);
    assert_eq!(miss, hit);
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 1);
    let csv = stdout(&run(&["eo", p], Some(dir.path())));
    assert_ne!(csv, hit);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn failed_runs_are_not_cached() {
    let dir = tempfile::tempdir().unwrap();
    let path = spec("hilbert_blumenthal3.json");
    assert_eq!(run(&["map", path.to_str().unwrap()], Some(dir.path())).status.code(), Some(3));
    assert!(std::fs::read_dir(dir.path()).map(|d| d.count() == 0).unwrap_or(true));
}
