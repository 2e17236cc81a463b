use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fabc_core::fixtures::FIGURE1_TEXT;
use fabc_core::ncb::macrostate_bound;
use fabc_core::parse_nbw;
use tempfile::TempDir;

const TWO_LOOP: &str = "\
nbw
states: 1
alphabet: a
initial: 0
accepting: 0
trans: 0 a 0
";

const AMBIGUOUS: &str = "\
nbw
states: 2
alphabet: a
initial: 0
accepting: 0
trans: 0 a 0 1
trans: 1 a 0
";

fn fabc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fabc")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn complement_ncb_with_stats() {
    let dir = TempDir::new().unwrap();
    let fig1 = write(&dir, "fig1.nbw", FIGURE1_TEXT);
    let out = dir.path().join("c.nbw");
    let o = fabc(&["complement", "--method", "ncb", "--in", s(&fig1), "--out", s(&out), "--stats"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let c = parse_nbw(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(c.state_count() as u128 <= macrostate_bound(3));
    let stats = String::from_utf8_lossy(&o.stderr);
    assert!(stats.contains(&format!("macrostates: {}", c.state_count())), "{stats}");
    assert!(stats.contains("(ok)"), "{stats}");
}

#[test]
fn complement_output_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let fig1 = write(&dir, "fig1.nbw", FIGURE1_TEXT);
    for method in ["kv", "kv-fa", "ncb"] {
        let (x, y) = (dir.path().join("x.nbw"), dir.path().join("y.nbw"));
        for out in [&x, &y] {
            let o = fabc(&["complement", "--method", method, "--in", s(&fig1), "--out", s(out)]);
            assert_eq!(o.status.code(), Some(0));
        }
        assert_eq!(fs::read(&x).unwrap(), fs::read(&y).unwrap(), "{method}");
    }
}

#[test]
fn membership_verdicts() {
    let dir = TempDir::new().unwrap();
    let fig1 = write(&dir, "fig1.nbw", FIGURE1_TEXT);
    let o = fabc(&["member", "--in", s(&fig1), "--stem", "", "--loop", "b"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "accepted");
    let o = fabc(&["member", "--in", s(&fig1), "--stem", "b", "--loop", "a"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn containment_verdicts() {
    let dir = TempDir::new().unwrap();
    let fig1 = write(&dir, "fig1.nbw", FIGURE1_TEXT);
    let o = fabc(&["contains", "--lhs", s(&fig1), "--rhs", s(&fig1), "--method", "kv"]);
    assert_eq!(o.status.code(), Some(0));
    let c = dir.path().join("c.nbw");
    fabc(&["complement", "--method", "ncb", "--in", s(&fig1), "--out", s(&c)]);
    for prune in [true, false] {
        let mut args = vec!["contains", "--lhs", s(&c), "--rhs", s(&fig1), "--method", "ncb"];
        if !prune {
            args.push("--no-prune");
        }
        let o = fabc(&args);
        assert_eq!(o.status.code(), Some(1));
        assert!(stdout(&o).starts_with("not contained"));
    }
}

#[test]
fn ambiguity_and_dag_diagnostics() {
    let dir = TempDir::new().unwrap();
    let fig1 = write(&dir, "fig1.nbw", FIGURE1_TEXT);
    let o = fabc(&["ambiguity", "--in", s(&fig1)]);
    assert_eq!((o.status.code(), stdout(&o).trim().to_string()), (Some(0), "finite".to_string()));
    let o = fabc(&["dag", "--in", s(&fig1), "--loop", "b"]);
    assert_eq!(stdout(&o), "omega branches: 1\npeel: survives\n");
    let o = fabc(&["dag", "--in", s(&fig1), "--loop", "a"]);
    assert!(stdout(&o).contains("emptied at stage"));

    let amb = write(&dir, "amb.nbw", AMBIGUOUS);
    let o = fabc(&["ambiguity", "--in", s(&amb)]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    assert!(stdout(&o).starts_with("infinite\nwitness:"));
    let out = dir.path().join("c.nbw");
    let o = fabc(&["complement", "--method", "kv-fa", "--in", s(&amb), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn emptiness() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.nbw", TWO_LOOP);
    let o = fabc(&["empty", "--in", s(&a)]);
    assert_eq!(o.status.code(), Some(1));
    let c = dir.path().join("c.nbw");
    fabc(&["complement", "--method", "ncb", "--in", s(&a), "--out", s(&c)]);
    let o = fabc(&["empty", "--in", s(&c)]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "empty\n".to_string()));
}

#[test]
fn validate_emits_one_record_per_trial() {
    let o = fabc(&["validate", "--n", "3", "--trials", "4", "--seed", "5", "--family", "fanbw-filtered", "--methods", "kv,kv-fa,ncb", "--lasso-bound", "2"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.starts_with("{\"trial\":") && l.contains("\"violations\":[]")));
    assert_eq!(out, stdout(&fabc(&["validate", "--n", "3", "--trials", "4", "--seed", "5", "--lasso-bound", "2"])));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.nbw", "nbw\nstates: two\n");
    let fig1 = write(&dir, "fig1.nbw", FIGURE1_TEXT);
    let out = dir.path().join("c.nbw");
    let cases: Vec<Vec<&str>> = vec![
        vec!["complement", "--method", "ncb", "--in", s(&bad), "--out", s(&out)],
        vec!["complement", "--method", "nope", "--in", s(&fig1), "--out", s(&out)],
        vec!["member", "--in", s(&fig1), "--loop", "z"],
        vec!["member", "--in", s(&fig1), "--loop", ""],
        vec!["member", "--in", "/definitely/missing.nbw", "--loop", "a"],
        vec!["validate", "--n", "0"],
        vec!["validate", "--n", "3", "--family", "odd"],
        vec!["frobnicate"],
        vec!["member", "--in", s(&fig1), "--loop", "a", "--unknown"],
    ];
    for args in cases {
        let o = fabc(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {o:?}");
        assert!(!String::from_utf8_lossy(&o.stderr).contains("panicked"));
    }
}
