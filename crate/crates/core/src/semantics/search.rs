use std::collections::BTreeSet;

use super::eval;
use crate::chain::{initial_model, Model};
use crate::propositional::{is_satisfiable, AtomOrder, TheorySet, TruthTable, Valuation};
use crate::syntax::{Atom, BcFormula, ClassicalFormula};

/// Where candidate background and chain formulas come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaPool {
    /// `top`, literals over the formula's atoms, and every box body and
    /// block formula of the formula together with its negation.
    Derived,
    /// `top` plus exactly these formulas.
    Explicit(Vec<ClassicalFormula>),
}

/// Bounds for [`find_countermodel`].
///
/// The enumerated initial models are all combinations of
/// - a valuation over the formula's world atoms with index at most
///   `max_atom_index`,
/// - a chain of length at most `max_chain_len` made of `top` entries, except
///   that the last entry may be any pool formula,
/// - a background of at most `max_background_pick` pool formulas,
///
/// skipping combinations whose background and chain are unsatisfiable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedSearchSpace {
    pub max_atom_index: u64,
    pub max_chain_len: usize,
    pub max_background_pick: usize,
    pub pool: FormulaPool,
}

impl Default for BoundedSearchSpace {
    fn default() -> Self {
        BoundedSearchSpace {
            max_atom_index: u64::MAX,
            max_chain_len: 4,
            max_background_pick: 1,
            pool: FormulaPool::Derived,
        }
    }
}

impl BoundedSearchSpace {
    /// Default bounds with chains long enough to separate every length the
    /// formula can distinguish.
    pub fn for_formula(formula: &BcFormula) -> Self {
        BoundedSearchSpace {
            max_chain_len: (formula.max_index() as usize).max(1),
            ..Default::default()
        }
    }

    /// Whether `model` is one of the models this space enumerates for
    /// `formula`.
    pub fn contains(&self, formula: &BcFormula, model: &Model) -> bool {
        let pool = candidate_pool(formula, self);
        let top = ClassicalFormula::top();
        let chain = model.chain();
        let chain_ok = chain.len() <= self.max_chain_len
            && chain.iter().rev().skip(1).all(|a| *a == top)
            && chain.last().is_none_or(|a| pool.contains(a));
        let world: BTreeSet<Atom> = world_atoms(formula, self).into_iter().collect();
        model.is_initial()
            && chain_ok
            && model.background().len() <= self.max_background_pick
            && model.background().iter().all(|a| pool.contains(a))
            && model.valuation().atoms().all(|p| world.contains(&p))
    }
}

fn world_atoms(formula: &BcFormula, space: &BoundedSearchSpace) -> Vec<Atom> {
    formula
        .world_atoms()
        .into_iter()
        .filter(|p| p.0 <= space.max_atom_index)
        .collect()
}

/// Candidate formulas for backgrounds and chains. `top` comes first;
/// semantically equivalent and unsatisfiable candidates are dropped.
pub fn candidate_pool(formula: &BcFormula, space: &BoundedSearchSpace) -> Vec<ClassicalFormula> {
    let mut raw = vec![ClassicalFormula::top()];
    match &space.pool {
        FormulaPool::Derived => {
            for p in formula.atoms() {
                if p.0 <= space.max_atom_index {
                    raw.push(ClassicalFormula::Atom(p));
                    raw.push(ClassicalFormula::not(ClassicalFormula::Atom(p)));
                }
            }
            let bodies = formula.box_bodies().into_iter();
            let blocks = formula.blocks().into_iter().map(|b| b.formula());
            for a in bodies.chain(blocks) {
                raw.push(a.clone());
                raw.push(ClassicalFormula::not(a.clone()));
            }
        }
        FormulaPool::Explicit(items) => raw.extend(items.iter().cloned()),
    }
    let order = AtomOrder::of(raw.iter());
    let mut seen: BTreeSet<TruthTable> = BTreeSet::new();
    raw.into_iter()
        .filter(|a| {
            let table = order.truth_table(a);
            !table.is_empty() && seen.insert(table)
        })
        .collect()
}

fn subsets_up_to<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), 0usize)];
    for _ in 0..max {
        let mut next = Vec::new();
        for (set, start) in frontier {
            for (i, item) in items.iter().enumerate().skip(start) {
                let mut grown: Vec<T> = set.clone();
                grown.push(item.clone());
                out.push(grown.clone());
                next.push((grown, i + 1));
            }
        }
        frontier = next;
    }
    out
}

/// Every initial model of the bounded space for `formula`, in search
/// order: by chain length, then chain tip, then background, then
/// valuation.
pub fn enumerate_models(formula: &BcFormula, space: &BoundedSearchSpace) -> Vec<Model> {
    let pool = candidate_pool(formula, space);
    let top = ClassicalFormula::top();
    let backgrounds = subsets_up_to(&pool, space.max_background_pick);
    let world = world_atoms(formula, space);
    let valuations: Vec<Valuation> = subsets_up_to(&world, world.len())
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();

    let mut out = Vec::new();
    for len in 0..=space.max_chain_len {
        let tips: Vec<&ClassicalFormula> = if len == 0 { vec![&top] } else { pool.iter().collect() };
        for tip in tips {
            let mut chain = vec![top.clone(); len.saturating_sub(1)];
            if len > 0 {
                chain.push(tip.clone());
            }
            for picked in &backgrounds {
                if is_satisfiable(picked.iter().chain(&chain)).is_none() {
                    continue;
                }
                let background: TheorySet = picked.iter().cloned().collect();
                for v in &valuations {
                    out.push(
                        initial_model(background.clone(), chain.clone(), v.clone())
                            .expect("satisfiability was checked above"),
                    );
                }
            }
        }
    }
    out
}

/// Searches the bounded space for an initial model falsifying `formula`.
/// Finding nothing does not make the formula valid.
pub fn find_countermodel(formula: &BcFormula, space: &BoundedSearchSpace) -> Option<Model> {
    enumerate_models(formula, space).into_iter().find(|m| !eval(m, formula))
}
