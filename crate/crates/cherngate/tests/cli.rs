//! End-to-end tests of the installed binary: exit-code contract, golden
//! outputs, and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cherngate"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    // success
    let out = run(&["buhstaber", "7"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "12\n");
    // failing verdict
    let tuple = dir.path().join("bad.tuple");
    std::fs::write(&tuple, "c3 = h3\n").unwrap();
    let out = run(&["check", "pn", "3", "--tuple", tuple.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: FAIL"));
    // usage / validation errors
    let out = run(&["roots", "Q7"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = run(&["check", "pn", "3", "--tuple", "/nonexistent.tuple"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn p2_is_unconditional() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = dir.path().join("any.tuple");
    std::fs::write(&tuple, "c1 = -5 h\nc2 = 17 h2\n").unwrap();
    let out = run(&["check", "pn", "2", "--tuple", tuple.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: PASS"));
}

#[test]
fn golden_qmatrices() {
    let dir = tempfile::tempdir().unwrap();
    for (t, golden) in [
        ("A2", include_str!("golden/qmatrix_a2.json")),
        ("B2", include_str!("golden/qmatrix_b2.json")),
    ] {
        let out = run(&["qmatrix", t], dir.path());
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8_lossy(&out.stdout), golden, "{t}");
    }
}

#[test]
fn golden_roots() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["roots", "A2"], dir.path());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        include_str!("golden/roots_a2.txt")
    );
}

#[test]
fn byte_identical_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = fixture("tangent_p3.tuple");
    for args in [
        vec!["roots", "G2"],
        vec!["weyl", "B2", "--bruhat"],
        vec!["qmatrix", "A2"],
        vec!["--json", "check", "pn", "3", "--tuple", tuple.as_str()],
        vec!["buhstaber", "12"],
    ] {
        let a = run(&args, dir.path());
        let b = run(&args, dir.path());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn model_and_tuple_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "check",
            "pn",
            "3",
            "--tuple",
            &fixture("tangent_p3.tuple"),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    // dimension-4 checker over the P^4 model file, trivial tuple passes
    let tuple = dir.path().join("zero.tuple");
    std::fs::write(&tuple, "c1 = 0\n").unwrap();
    let out = run(
        &[
            "check",
            "model",
            &fixture("p4.model"),
            "--tuple",
            tuple.to_str().unwrap(),
            "--dim4",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // Wu route over the ingested P^2 model is rejected (dimension too small)
    let out = run(
        &[
            "check",
            "model",
            &fixture("p2.model"),
            "--tuple",
            tuple.to_str().unwrap(),
            "--wu",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn calibration_flow_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = dir.path().join("t.tuple");
    std::fs::write(&tuple, std::fs::read_to_string(fixture("a2_line_bundles.tuple")).unwrap())
        .unwrap();
    // refuses to check without a record
    let out = run(
        &["check", "flag", "A2", "--tuple", tuple.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("calibrate"));
    // calibrate writes the record into the working directory
    let out = run(&["calibrate", "A2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("cherngate-calibration.json").exists());
    // both routes pass for a sum of line bundles
    for route in ["cells", "weights"] {
        let out = run(
            &[
                "check",
                "flag",
                "A2",
                "--tuple",
                tuple.to_str().unwrap(),
                "--route",
                route,
            ],
            dir.path(),
        );
        assert_eq!(
            out.status.code(),
            Some(0),
            "route {route}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    // parabolic target with an invariant tuple: P{1} of A2 is a plane,
    // everything of rank 2 passes
    std::fs::write(&tuple, "c1 = x2\nc2 = x2^2\n").unwrap();
    let out = run(
        &[
            "check",
            "flag",
            "A2",
            "--parabolic",
            "1",
            "--tuple",
            tuple.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
