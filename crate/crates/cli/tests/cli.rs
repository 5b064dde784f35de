use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn calc(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_calc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn script(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/scripts").join(name).display().to_string()
}

fn text(b: &[u8]) -> String {
    String::from_utf8(b.to_vec()).unwrap()
}

#[test]
fn worked_example_is_unsat() {
    let out = calc(&[&script("worked_example.smt2")], "");
    assert_eq!(text(&out.stdout), "unsat\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn negative_square_is_unsat() {
    let out = calc(&[], "(declare-const x Real)(assert (< (* x x) 0))(check-sat)");
    assert_eq!(text(&out.stdout), "unsat\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn square_root_qe_verifies() {
    let out = calc(&[&script("square_root.smt2"), "--verify", "200", "--seed", "3"], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(text(&out.stdout), "(>= x (root x 1 x))\n");
    assert!(text(&out.stderr).contains("200 trials, 0 failures"));
}

#[test]
fn nullification_exits_with_two() {
    let out = calc(
        &[],
        "(declare-const x Real)(declare-const y Real)\
         (assert (forall ((z Real)) (> (+ (* x z) y) 0)))(check-sat)",
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(text(&out.stdout), "unknown\n");
    assert!(text(&out.stderr).contains("(+ (* z x) y)"));
}

#[test]
fn errors_exit_with_one() {
    let out = calc(&[], "(declare-const x Real)\n(assert (/ x 2))\n(check-sat)");
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("2:9: unsupported feature: division"));
    let out = calc(&["--no-root-atoms"], "(check-sat)");
    assert_eq!(out.status.code(), Some(1));
    let out = calc(&["--boolean", "sometimes"], "");
    assert_ne!(out.status.code(), Some(0));
    let out = calc(&["/nonexistent/script.smt2"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stats_lines() {
    let out = calc(&["--stats", "--boolean", "explore"], "(declare-const x Real)(assert (> x 1))(check-sat)");
    let stdout = text(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("sat"));
    for (line, key) in lines.zip(["implicants_generated", "implicants_used", "cells_characterized", "samples_tried", "resultants_computed"]) {
        let (k, v) = line.split_once('=').unwrap();
        assert_eq!(k, key);
        v.parse::<u64>().unwrap();
    }
}

#[test]
fn mode_flag_overrides_the_command() {
    let out = calc(&["--mode", "check", &script("square_root.smt2")], "");
    assert_eq!(text(&out.stdout), "sat\n");
    let out = calc(&["--mode", "qe"], "(declare-const x Real)(assert (exists ((y Real)) (< (* x y) 0)))(check-sat)");
    assert_eq!(text(&out.stdout), "(not (= x (root x 1 x)))\n");
}
