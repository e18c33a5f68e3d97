use std::fs;
use std::path::PathBuf;

use blocklogic::chain::parse_model_text;
use blocklogic::reduction::normalize;
use blocklogic::semantics::eval;
use blocklogic::syntax::{parse_block, parse_classical, parse_formula};
use blocklogic::validity::decide;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Non-comment lines split on `::`.
fn rows(name: &str) -> Vec<Vec<String>> {
    fs::read_to_string(golden(name))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split("::").map(|c| c.trim().to_string()).collect())
        .collect()
}

fn split_on_semicolons(cell: &str) -> Vec<&str> {
    cell.split(';').map(str::trim).filter(|s| !s.is_empty()).collect()
}

#[test]
fn validity_verdicts() {
    for row in rows("validity.txt") {
        let f = parse_formula(&row[1]).unwrap();
        let v = decide(&f).unwrap();
        assert_eq!(if v.valid { "VALID" } else { "INVALID" }, row[0], "{}", row[1]);
        if let Some(m) = v.countermodel {
            assert!(!eval(&m, &f));
        }
    }
}

#[test]
fn eval_cases() {
    for row in rows("eval.txt") {
        let spec = parse_model_text(&fs::read_to_string(golden(&format!("models/{}", row[0]))).unwrap()).unwrap();
        let (model, _) = spec.into_completed_model().unwrap();
        let f = parse_formula(&row[1]).unwrap();
        assert_eq!(eval(&model, &f).to_string(), row[2], "{} on {}", row[1], row[0]);
    }
}

#[test]
fn normal_forms() {
    for row in rows("normalize.txt") {
        let got = normalize(&parse_formula(&row[0]).unwrap()).to_formula();
        assert_eq!(got, parse_formula(&row[1]).unwrap(), "{}", row[0]);
    }
}

#[test]
fn completions() {
    for row in rows("completion.txt") {
        let spec = parse_model_text(&fs::read_to_string(golden(&format!("models/{}", row[0]))).unwrap()).unwrap();
        let done = spec.complete().unwrap();
        let chain: Vec<_> = split_on_semicolons(&row[1]).into_iter().map(|a| parse_classical(a).unwrap()).collect();
        let pending: Vec<_> = split_on_semicolons(&row[2]).into_iter().map(|b| parse_block(b).unwrap()).collect();
        assert_eq!(done.chain, chain, "{}", row[0]);
        assert_eq!(done.pending, pending, "{}", row[0]);
    }
}
