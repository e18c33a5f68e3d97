use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blocklogic")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn validity_verdicts() {
    let o = run(&["validity", "[1,P0]Q2 <-> Q2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "VALID\n");

    let o = run(&["validity", "[2,top]([1,P0]Q2 <-> Q2)"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("INVALID\n"));
    // the countermodel is printed in the model file format
    let model = out.strip_prefix("INVALID\n").unwrap();
    let spec = blocklogic::chain::parse_model_text(model).unwrap();
    assert!(spec.pending.is_empty());
}

#[test]
fn complete_remark_model() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.txt", "PU:\n2 top\n1 P0\n");
    let o = run(&["complete", model.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("BC:\nP0\ntop\n"), "{out}");
    assert!(out.contains("accepted [1, P0]\naccepted [2, top]\n"), "{out}");
}

#[test]
fn eval_and_update() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.txt", "PU:\n2 top\n");
    let m = model.to_str().unwrap();
    assert_eq!(stdout(&run(&["eval", m, "[1, P0]Q2"])), "true\n");
    let o = run(&["eval", m, "Q2"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "false\n"));
    let o = run(&["update", m, "1 P0", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("accepted [2, top]"));
}

#[test]
fn normalize_and_translate() {
    let o = run(&["normalize", "[2, P0][1, P1]Q1", "--trace"]);
    let out = stdout(&o);
    assert!(out.starts_with("[1, P1][2, P0]Q1\n"), "{out}");
    assert!(out.contains("A6: "));
    let o = run(&["translate", "box P0"]);
    assert_eq!(stdout(&o), "box P0\n");
    let o = run(&["translate", "[1, P0]Q1"]);
    assert_eq!(stdout(&o), "not Q1 & not box not P0 | Q1\n");
}

#[test]
fn countermodel_search() {
    let o = run(&["countermodel", "box P0 -> P0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("I:\nP0\n"));
    let o = run(&["countermodel", "Q2 -> Q1"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "none found within bounds\n"));
}

#[test]
fn proof_checking() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.proof", "1. P0 -> P0 ; AX PT\n2. box (P0 -> P0) ; NEC 1\n");
    let o = run(&["check-proof", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("OK\n"));
    let bad = write(
        &dir,
        "bad.proof",
        "1. [1, P0]Q2 <-> Q2 ; AX A3.3\n2. [2, P1][1, P0]Q2 <-> [2, P1]Q2 ; SUB 1 ; context [2, P1]X\n",
    );
    let o = run(&["check-proof", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "error: line 2: SUB conclusion is not compliant\n");
}

#[test]
fn simulation() {
    let dir = TempDir::new().unwrap();
    let blocks = write(&dir, "blocks.txt", "1 P0\n2 P1\n");
    let schedule = write(&dir, "schedule.txt", "nodes:\nA: 1 2\nB: 2 1\n");
    let o = run(&["simulate", schedule.to_str().unwrap(), blocks.to_str().unwrap(), "--query", "Q2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("node B\n  1. #2 [2, P1] | pending\n"), "{out}");
    assert!(out.contains("A: Q2 = true\nB: Q2 = true\n"), "{out}");
}

#[test]
fn exit_statuses() {
    assert_eq!(run(&["validity"]).status.code(), Some(2));
    assert_eq!(run(&["validity", "P0 ->"]).status.code(), Some(3));
    assert_eq!(run(&["validity", "box Q1"]).status.code(), Some(3));
    assert_eq!(run(&["check-proof", "/nonexistent/file"]).status.code(), Some(5));
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.txt", "I:\nbot\n");
    assert_eq!(run(&["eval", model.to_str().unwrap(), "P0"]).status.code(), Some(4));
    let model = write(&dir, "p.txt", "PU:\n1 P0\n");
    assert_eq!(run(&["eval", model.to_str().unwrap(), "P0"]).status.code(), Some(4));
    assert_eq!(run(&["eval", "--complete", model.to_str().unwrap(), "box P0"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["validity", "[3, P1](box P0 -> [1, P2]Q1) | Q2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
