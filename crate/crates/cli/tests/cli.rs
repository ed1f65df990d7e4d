use std::path::Path;
use std::process::{Command, Output};

use graver_ugb::{IntMatrix, Integer, SignedVector};
use graver_ugb_cli::format::{
    canonical_set, parse_matrix, parse_vector_set, print_matrix, print_vector_set,
};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graver-ugb"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn matrix_then_graver_then_ugb() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["matrix", "--family", "S", "--label", "2", "--out", "s2.mat"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("s2.mat")).unwrap();
    assert_eq!(text, "2 3\n1 2 3\n1 1 1\n");

    let g = run(&["graver", "s2.mat"], dir.path());
    assert_eq!(g.status.code(), Some(0));
    assert_eq!(stdout(&g), "1 3\n1 -2 1\n");

    let u = run(&["ugb", "s2.mat"], dir.path());
    assert_eq!(u.status.code(), Some(0));
    assert_eq!(stdout(&u), stdout(&g));
}

#[test]
fn ugb_drops_non_members() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &[
            "matrix", "--family", "S", "--label", "5,4", "--out", "a.mat",
        ],
        dir.path(),
    );
    let g = parse_vector_set(&stdout(&run(&["graver", "a.mat"], dir.path())))
        .unwrap()
        .1;
    let u = parse_vector_set(&stdout(&run(&["ugb", "a.mat"], dir.path())))
        .unwrap()
        .1;
    assert!(u.len() < g.len());
    assert!(u.iter().all(|v| g.contains(v)));
}

#[test]
fn engines_print_identical_sets() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &[
            "matrix",
            "--family",
            "H",
            "--partition",
            "3,3",
            "--out",
            "h.mat",
        ],
        dir.path(),
    );
    let a = run(&["graver", "h.mat"], dir.path());
    let b = run(&["graver", "h.mat", "--engine", "pottier"], dir.path());
    assert_eq!(stdout(&a), stdout(&b));
    let o = run(&["oracle", "h.mat", "--bound", "14"], dir.path());
    assert_eq!(stdout(&a), stdout(&o));
}

#[test]
fn complexity_values() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.mat"), "1 4\n1 1 1 1\n").unwrap();
    std::fs::write(dir.path().join("d.mat"), "1 4\n1 2 3 4\n").unwrap();
    let o = run(&["complexity", "c.mat", "d.mat"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "5");
    let o = run(&["complexity", "c.mat", "d.mat", "--literal"], dir.path());
    assert_eq!(stdout(&o).trim(), "5");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("zero.mat"), "1 3\n1 0 2\n").unwrap();
    std::fs::write(p.join("neg.mat"), "1 3\n1 -1 2\n").unwrap();
    std::fs::write(p.join("bad.mat"), "1 3\n1 x 2\n").unwrap();
    std::fs::write(p.join("short.mat"), "2 3\n1 1 1\n").unwrap();
    std::fs::write(p.join("c.mat"), "1 2\n1 1\n").unwrap();
    std::fs::write(p.join("d.mat"), "1 3\n1 2 3\n").unwrap();

    assert_eq!(run(&["ugb", "zero.mat"], p).status.code(), Some(3));
    assert_eq!(run(&["ugb", "neg.mat"], p).status.code(), Some(3));
    assert_eq!(run(&["graver", "bad.mat"], p).status.code(), Some(2));
    assert_eq!(run(&["graver", "short.mat"], p).status.code(), Some(2));
    assert_eq!(run(&["graver", "missing.mat"], p).status.code(), Some(2));
    assert_eq!(
        run(&["complexity", "c.mat", "d.mat"], p).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify-paper", "--case", "S(9,9,9)"], p)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["matrix", "--family", "Q", "--label", "2"], p)
            .status
            .code(),
        Some(2)
    );
    // Graver bases do not need nonnegativity.
    assert_eq!(run(&["graver", "neg.mat"], p).status.code(), Some(0));
}

#[test]
fn single_case_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["verify-paper", "--case", "S(6)", "--out", "r"],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r/report.json")).unwrap())
            .unwrap();
    assert!(json.get("counterexamples").is_some());
    assert!(std::fs::read_to_string(dir.path().join("r/report.txt"))
        .unwrap()
        .contains("S(6)"));
}

#[test]
fn timeout_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["verify-paper", "--case", "S(6)"])
        .env(graver_ugb_cli::TIMEOUT_ENV, "soon")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selfcheck_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["selfcheck", "--seed", "7"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_round_trip(rows in 1usize..4, cols in 1usize..5, data in prop::collection::vec(-50i64..50, 20)) {
        let m = IntMatrix::new(rows, cols, data[..rows * cols].iter().map(|&x| Integer::from(x)).collect()).unwrap();
        prop_assert_eq!(parse_matrix(&print_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn vector_set_round_trip(vs in prop::collection::vec(prop::collection::vec(-9i64..9, 4), 0..8)) {
        let vectors: Vec<SignedVector> =
            vs.iter().map(|v| SignedVector::from_i64s(v)).filter(|v| !v.is_zero()).collect();
        let text = print_vector_set(4, &vectors);
        let (width, parsed) = parse_vector_set(&text).unwrap();
        prop_assert_eq!(width, 4);
        prop_assert_eq!(&parsed, &canonical_set(vectors));
        prop_assert_eq!(print_vector_set(4, &parsed), text);
    }
}
