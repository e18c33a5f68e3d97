//! Truth of formulas in models, and a bounded search for countermodels.

pub mod principles;
mod search;

pub use search::{candidate_pool, enumerate_models, find_countermodel, BoundedSearchSpace, FormulaPool};

use crate::chain::{update_model, Model};
use crate::propositional::entails;
use crate::syntax::{acc_formula, BcFormula, ClassicalFormula};

/// `M ⊨ F`.
pub fn eval(model: &Model, formula: &BcFormula) -> bool {
    match formula {
        BcFormula::Falsum => false,
        BcFormula::P(p) => model.valuation().contains(*p),
        BcFormula::Q(q) => q.index() <= model.len() as u64,
        BcFormula::Implies(a, b) => !eval(model, a) || eval(model, b),
        BcFormula::Box(a) => entails(model.beliefs(), a),
        BcFormula::Update(block, inner) => eval(&update_model(model, block), inner),
    }
}

/// `M ⊨ Acc(i, A)`. Panics on index 0.
pub fn eval_acc(model: &Model, index: u64, formula: &ClassicalFormula) -> bool {
    eval(model, &acc_formula(index, formula).expect("acceptance index must be positive"))
}
