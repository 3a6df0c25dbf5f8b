use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use subsat_core::{PairGenerator, Signature};

fn subsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsat")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_reports_subsumption_with_its_substitution() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(&dir, "s", "p(g(X1,X2)) | ~q(X3)\n");
    let m = write(&dir, "m", "p(g(c,d)) | ~p(f(d)) | ~q(Y1)\n");
    let out = subsat(&["check", &s, &m, "--expect", "S+"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("SUBSUMED by σ={X1↦c,X2↦d,X3↦Y1}"));
}

#[test]
fn check_reports_the_resolution_conclusion() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(&dir, "s", "~p(g(X1,X2)) | ~q(X3)");
    let m = write(&dir, "m", "p(g(c,d)) | ~p(f(d)) | ~q(Y1)");
    for encoding in ["direct", "indirect", "dynamic"] {
        let out = subsat(&["check", &s, &m, "--encoding", encoding, "--expect", "SR+"]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        assert!(text.contains("NOT SUBSUMED"));
        assert!(text.contains("SR: conclusion ~p(f(d)) | ~q(Y1)"), "{text}");
    }
    let out = subsat(&["check", &s, &m, "--expect", "S+"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(&dir, "s", "p(X");
    let m = write(&dir, "m", "p(c)");
    assert_eq!(subsat(&["check", &s, &m]).status.code(), Some(2));
    let missing = dir.path().join("nope").to_str().unwrap().to_string();
    assert_eq!(subsat(&["check", &missing, &m]).status.code(), Some(2));
    assert_eq!(subsat(&["check", &m, &m, "--cutoff", "lots"]).status.code(), Some(2));
    assert_eq!(subsat(&["replay", &missing]).status.code(), Some(2));
}

#[test]
fn replay_of_the_worked_examples_meets_every_tag() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let log = data("worked.log");
    let out = subsat(&["replay", log.to_str().unwrap(), "--oracle-verify", "--stats-out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = rows.lines().collect();
    assert_eq!(lines[0], "id,stage,encoding,ticks,outcome,ns");
    assert_eq!(lines.len(), 9);
    let outcomes: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(outcomes, ["subsumed", "none", "none", "resolved", "resolved", "none", "none", "none"]);
    assert!(stdout(&out).contains("mismatches: 0"));
}

#[test]
fn replay_of_an_empty_log_writes_only_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let log = write(&dir, "empty.log", "# nothing\n");
    let csv = dir.path().join("rows.csv");
    let out = subsat(&["replay", &log, "--stats-out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(csv).unwrap(), "id,stage,encoding,ticks,outcome,ns\n");
}

#[test]
fn replay_skips_bad_records_and_fails_at_the_end() {
    let dir = tempfile::tempdir().unwrap();
    let log = write(&dir, "bad.log", "p(X) ; p(c) ; S+\np( ; q\np(X) ; q(c) ; S-\n");
    let csv = dir.path().join("rows.csv");
    let out = subsat(&["replay", &log, "--stats-out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(fs::read_to_string(csv).unwrap().lines().count(), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn replay_flags_unmet_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let log = write(&dir, "wrong.log", "p(X) ; q(c) ; S+\n");
    assert_eq!(subsat(&["replay", &log]).status.code(), Some(1));
}

#[test]
fn replay_ticks_are_stable_and_cutoff_only_loses_expensive_positives() {
    let dir = tempfile::tempdir().unwrap();
    let mut g = PairGenerator::new(9, Signature::standard(), 5, 5);
    let text: String = (0..1000).map(|_| {
        let (s, m) = g.next_pair();
        format!("{s} ; {m}\n")
    }).collect();
    let log = write(&dir, "fuzz.log", &text);
    let rows = |cutoff: &str, name: &str| -> Vec<Vec<String>> {
        let csv = dir.path().join(name);
        let out = subsat(&["replay", &log, "--oracle-verify", "--cutoff", cutoff, "--stats-out", csv.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        fs::read_to_string(csv)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').take(5).map(String::from).collect())
            .collect()
    };
    let full = rows("none", "a.csv");
    assert_eq!(full, rows("none", "b.csv"));
    let capped = rows("150", "c.csv");
    let positive = |r: &Vec<String>| r[4] == "subsumed" || r[4] == "resolved";
    for (f, c) in full.iter().zip(&capped) {
        let ticks: u64 = f[3].parse().unwrap();
        assert_eq!(positive(f) && !positive(c), positive(f) && ticks > 150, "{f:?} {c:?}");
    }
}

#[test]
fn naive_loop_gives_the_same_outcomes() {
    let log = data("worked.log");
    let out = subsat(&["replay", log.to_str().unwrap(), "--optimized-loop", "false"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("subsumed: 1\nresolved: 2\n"));
}

#[test]
fn fuzz_runs_clean_and_is_reproducible() {
    let a = subsat(&["fuzz", "--seed", "1", "--count", "10000"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("disagreements: 0"));
    let b = subsat(&["fuzz", "--seed", "1", "--count", "10000"]);
    assert_eq!(a.stdout, b.stdout);
    let d = subsat(&["fuzz", "--degenerate", "--count", "2000"]);
    assert_eq!(d.status.code(), Some(0));
    assert_eq!(subsat(&["fuzz", "--max-side", "40"]).status.code(), Some(2));
}
