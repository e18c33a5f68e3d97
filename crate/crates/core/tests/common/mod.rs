//! Reference implementations used as test oracles. They share no code with
//! the library beyond the formula types.

#![allow(dead_code)]

pub mod strategy;

use std::collections::BTreeSet;

use blocklogic::propositional::TheorySet;
use blocklogic::syntax::{Block, ClassicalFormula};

fn atoms_of(a: &ClassicalFormula, out: &mut BTreeSet<u64>) {
    match a {
        ClassicalFormula::Falsum => {}
        ClassicalFormula::Atom(p) => {
            out.insert(p.0);
        }
        ClassicalFormula::Implies(x, y) => {
            atoms_of(x, out);
            atoms_of(y, out);
        }
    }
}

fn truth(a: &ClassicalFormula, assignment: &[(u64, bool)]) -> bool {
    match a {
        ClassicalFormula::Falsum => false,
        ClassicalFormula::Atom(p) => assignment.iter().find(|(q, _)| *q == p.0).is_some_and(|(_, v)| *v),
        ClassicalFormula::Implies(x, y) => !truth(x, assignment) || truth(y, assignment),
    }
}

/// Satisfiability by trying every assignment.
pub fn naive_sat(formulas: &[&ClassicalFormula]) -> bool {
    let mut atoms = BTreeSet::new();
    for a in formulas {
        atoms_of(a, &mut atoms);
    }
    let atoms: Vec<u64> = atoms.into_iter().collect();
    assert!(atoms.len() <= 20, "naive oracle is exponential");
    (0..1u64 << atoms.len()).any(|row| {
        let assignment: Vec<(u64, bool)> = atoms.iter().enumerate().map(|(k, p)| (*p, row >> k & 1 == 1)).collect();
        formulas.iter().all(|a| truth(a, &assignment))
    })
}

pub fn naive_entails(gamma: &[&ClassicalFormula], a: &ClassicalFormula) -> bool {
    let not_a = ClassicalFormula::implies(a.clone(), ClassicalFormula::Falsum);
    let mut all: Vec<&ClassicalFormula> = gamma.to_vec();
    all.push(&not_a);
    !naive_sat(&all)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleCompletion {
    pub chain: Vec<ClassicalFormula>,
    pub pending: Vec<Block>,
    pub accepted: Vec<Block>,
    pub rejected: Vec<Block>,
    pub discarded: Vec<Block>,
}

/// Chain completion written out step by step.
pub fn oracle_complete(
    background: &TheorySet,
    chain: &[ClassicalFormula],
    pending: &[Block],
) -> OracleCompletion {
    let mut out = OracleCompletion { chain: chain.to_vec(), pending: pending.to_vec(), ..Default::default() };
    let mut wanted = out.chain.len() as u64 + 1;
    'outer: loop {
        let mut hit = None;
        for k in 0..out.pending.len() {
            if out.pending[k].index() == wanted {
                hit = Some(k);
                break;
            }
        }
        let Some(k) = hit else { break 'outer };
        let block = out.pending.remove(k);
        let mut gamma: Vec<&ClassicalFormula> = background.iter().collect();
        gamma.extend(out.chain.iter());
        gamma.push(block.formula());
        if naive_sat(&gamma) {
            out.chain.push(block.formula().clone());
            wanted += 1;
            out.accepted.push(block);
        } else {
            out.rejected.push(block);
        }
    }
    let mut k = out.pending.len();
    while k > 0 {
        k -= 1;
        if out.pending[k].index() < wanted {
            let b = out.pending.remove(k);
            out.discarded.push(b);
        }
    }
    out
}
