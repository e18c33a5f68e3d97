//! Persistence, consistency, success and failure of belief under updates.

use crate::corpus::{Bounds, Generator};
use crate::syntax::{acc_formula, BcFormula, Block, ClassicalFormula};

use super::eval;

fn block(i: u64, a: &ClassicalFormula) -> Block {
    Block::new(i, a.clone()).expect("principle indices are positive")
}

/// `box A -> [i,B]box A`
pub fn persistence(i: u64, b: &ClassicalFormula, a: &ClassicalFormula) -> BcFormula {
    BcFormula::implies(
        BcFormula::boxed(a.clone()),
        BcFormula::update(block(i, b), BcFormula::boxed(a.clone())),
    )
}

/// `[i,B]not box bot`
pub fn consistency(i: u64, b: &ClassicalFormula) -> BcFormula {
    BcFormula::update(block(i, b), BcFormula::not(BcFormula::boxed(ClassicalFormula::Falsum)))
}

/// `Acc(i,A) -> [i,A]box A`
pub fn success(i: u64, a: &ClassicalFormula) -> BcFormula {
    BcFormula::implies(
        acc_formula(i, a).expect("principle indices are positive"),
        BcFormula::update(block(i, a), BcFormula::boxed(a.clone())),
    )
}

/// `(Qi | not Q(i-1)) -> ([i,B]box A <-> box A)`, defined for `i > 1`.
pub fn failure(i: u64, b: &ClassicalFormula, a: &ClassicalFormula) -> Option<BcFormula> {
    (i > 1).then(|| {
        BcFormula::implies(
            BcFormula::or(BcFormula::q(i), BcFormula::not(BcFormula::q(i - 1))),
            BcFormula::iff(
                BcFormula::update(block(i, b), BcFormula::boxed(a.clone())),
                BcFormula::boxed(a.clone()),
            ),
        )
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Principle {
    Persistence,
    Consistency,
    Success,
    Failure,
}

impl Principle {
    pub const ALL: [Principle; 4] =
        [Principle::Persistence, Principle::Consistency, Principle::Success, Principle::Failure];

    /// A random instance; `i` ranges over `1..=max_index`, or
    /// `2..=max_index` for failure.
    pub fn instance(self, gen: &mut Generator) -> BcFormula {
        let (a, b) = (gen.small_classical(), gen.small_classical());
        match self {
            Principle::Persistence => persistence(gen.index(), &b, &a),
            Principle::Consistency => consistency(gen.index(), &b),
            Principle::Success => success(gen.index(), &a),
            Principle::Failure => loop {
                if let Some(f) = failure(gen.index(), &b, &a) {
                    break f;
                }
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrincipleReport {
    pub checked: usize,
    /// Principle instances with the random initial model that falsified
    /// them.
    pub violations: Vec<(Principle, BcFormula, String)>,
}

/// Evaluates `trials` random instances of each principle, each on a random
/// initial model.
pub fn check_principles(seed: u64, trials: usize) -> PrincipleReport {
    let mut gen = Generator::new(seed, Bounds::default());
    let mut report = PrincipleReport::default();
    for p in Principle::ALL {
        for _ in 0..trials {
            let f = p.instance(&mut gen);
            let m = gen.initial_model();
            report.checked += 1;
            if !eval(&m, &f) {
                report.violations.push((p, f, m.to_string()));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn shapes() {
        let a = ClassicalFormula::atom(0);
        let b = ClassicalFormula::atom(1);
        assert_eq!(persistence(2, &b, &a), parse_formula("box P0 -> [2, P1]box P0").unwrap());
        assert_eq!(consistency(1, &b), parse_formula("[1, P1]not box bot").unwrap());
        assert_eq!(
            failure(3, &b, &a).unwrap(),
            parse_formula("Q3 | not Q2 -> ([3, P1]box P0 <-> box P0)").unwrap()
        );
        assert!(failure(1, &b, &a).is_none());
    }

    #[test]
    fn hold_on_random_models() {
        let report = check_principles(42, 100);
        assert_eq!(report.checked, 400);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }
}
