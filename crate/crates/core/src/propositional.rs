//! Classical propositional semantics: valuations, satisfiability and
//! entailment.
//!
//! Small instances are decided by bit-parallel truth tables over the atoms
//! that occur. Above [`Solver::table_limit`] atoms a plain DPLL search over
//! a Tseitin encoding takes over.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Atom, ClassicalFormula};

/// A valuation: the set of atoms that are true.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation(BTreeSet<Atom>);

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn contains(&self, p: Atom) -> bool {
        self.0.contains(&p)
    }

    pub fn insert(&mut self, p: Atom) {
        self.0.insert(p);
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Atom> for Valuation {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

/// A finite set of classical formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TheorySet(BTreeSet<ClassicalFormula>);

impl TheorySet {
    pub fn new() -> Self {
        TheorySet::default()
    }

    pub fn insert(&mut self, a: ClassicalFormula) -> bool {
        self.0.insert(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ClassicalFormula> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &ClassicalFormula) -> bool {
        self.0.contains(a)
    }

    pub fn is_satisfiable(&self) -> Option<Valuation> {
        is_satisfiable(self.iter())
    }
}

impl FromIterator<ClassicalFormula> for TheorySet {
    fn from_iter<T: IntoIterator<Item = ClassicalFormula>>(iter: T) -> Self {
        TheorySet(iter.into_iter().collect())
    }
}

pub fn eval_classical(v: &Valuation, a: &ClassicalFormula) -> bool {
    match a {
        ClassicalFormula::Falsum => false,
        ClassicalFormula::Atom(p) => v.contains(*p),
        ClassicalFormula::Implies(x, y) => !eval_classical(v, x) || eval_classical(v, y),
    }
}

/// A fixed ordering of atoms; atom `k` of the order is bit `k` of a row
/// number in a truth table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomOrder {
    atoms: Vec<Atom>,
}

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl AtomOrder {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        atoms.sort();
        atoms.dedup();
        AtomOrder { atoms }
    }

    pub fn of<'a>(formulas: impl IntoIterator<Item = &'a ClassicalFormula>) -> Self {
        let mut atoms = Vec::new();
        for a in formulas {
            a.collect_atoms(&mut atoms);
        }
        AtomOrder::new(atoms)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn rows(&self) -> usize {
        1usize << self.atoms.len()
    }

    fn words(&self) -> usize {
        self.rows().div_ceil(64)
    }

    fn position(&self, p: Atom) -> usize {
        self.atoms
            .binary_search(&p)
            .expect("atom order covers every atom of the formula")
    }

    /// Truth values of `a` on rows `64 * word .. 64 * word + 64`.
    fn eval_word(&self, a: &ClassicalFormula, word: usize) -> u64 {
        match a {
            ClassicalFormula::Falsum => 0,
            ClassicalFormula::Atom(p) => {
                let k = self.position(*p);
                if k < 6 {
                    LANE_PATTERNS[k]
                } else if (word >> (k - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            }
            ClassicalFormula::Implies(x, y) => !self.eval_word(x, word) | self.eval_word(y, word),
        }
    }

    fn word_mask(&self) -> u64 {
        match self.rows() {
            r if r >= 64 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }

    /// The set of rows on which `a` is true.
    pub fn truth_table(&self, a: &ClassicalFormula) -> TruthTable {
        let mask = self.word_mask();
        TruthTable {
            words: (0..self.words()).map(|w| self.eval_word(a, w) & mask).collect(),
        }
    }

    /// The set of all rows.
    pub fn full_table(&self) -> TruthTable {
        let mask = self.word_mask();
        TruthTable { words: vec![mask; self.words()] }
    }

    pub fn valuation_of_row(&self, row: usize) -> Valuation {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(k, _)| (row >> k) & 1 == 1)
            .map(|(_, p)| *p)
            .collect()
    }
}

/// A set of truth-table rows, stored as a bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    words: Vec<u64>,
}

impl TruthTable {
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn first_row(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn intersect_with(&mut self, other: &TruthTable) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersects(&self, other: &TruthTable) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &TruthTable) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

/// Satisfiability solver configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Solver {
    /// Largest atom count decided by truth-table enumeration.
    pub table_limit: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver { table_limit: 12 }
    }
}

impl Solver {
    /// A witness over the atoms occurring in `gamma`, if one exists.
    pub fn satisfiable(&self, gamma: &[&ClassicalFormula]) -> Option<Valuation> {
        let order = AtomOrder::of(gamma.iter().copied());
        if order.len() <= self.table_limit {
            let mut rows = order.full_table();
            for a in gamma {
                rows.intersect_with(&order.truth_table(a));
                if rows.is_empty() {
                    return None;
                }
            }
            rows.first_row().map(|r| order.valuation_of_row(r))
        } else {
            Dpll::encode(gamma).solve()
        }
    }
}

pub fn is_satisfiable<'a>(gamma: impl IntoIterator<Item = &'a ClassicalFormula>) -> Option<Valuation> {
    let gamma: Vec<&ClassicalFormula> = gamma.into_iter().collect();
    Solver::default().satisfiable(&gamma)
}

/// Every valuation satisfying `gamma` satisfies `a`.
pub fn entails<'a>(gamma: impl IntoIterator<Item = &'a ClassicalFormula>, a: &ClassicalFormula) -> bool {
    let negated = ClassicalFormula::not(a.clone());
    let mut all: Vec<&ClassicalFormula> = gamma.into_iter().collect();
    all.push(&negated);
    Solver::default().satisfiable(&all).is_none()
}

pub fn is_tautology(a: &ClassicalFormula) -> bool {
    entails(std::iter::empty(), a)
}

type Lit = i32;

/// DPLL over a Tseitin encoding; no clause learning.
struct Dpll {
    clauses: Vec<Vec<Lit>>,
    vars: usize,
    atom_vars: Vec<(Atom, usize)>,
}

impl Dpll {
    fn encode(gamma: &[&ClassicalFormula]) -> Self {
        let mut enc = Dpll { clauses: Vec::new(), vars: 0, atom_vars: Vec::new() };
        let mut atoms: BTreeMap<Atom, usize> = BTreeMap::new();
        let falsum = enc.fresh();
        enc.clauses.push(vec![-(falsum as Lit)]);
        for a in gamma {
            let v = enc.node(a, &mut atoms, falsum);
            enc.clauses.push(vec![v as Lit]);
        }
        enc.atom_vars = atoms.into_iter().collect();
        enc
    }

    fn fresh(&mut self) -> usize {
        self.vars += 1;
        self.vars
    }

    fn node(&mut self, a: &ClassicalFormula, atoms: &mut BTreeMap<Atom, usize>, falsum: usize) -> usize {
        match a {
            ClassicalFormula::Falsum => falsum,
            ClassicalFormula::Atom(p) => {
                if let Some(v) = atoms.get(p) {
                    return *v;
                }
                let v = self.fresh();
                atoms.insert(*p, v);
                v
            }
            ClassicalFormula::Implies(x, y) => {
                let x = self.node(x, atoms, falsum) as Lit;
                let y = self.node(y, atoms, falsum) as Lit;
                let n = self.fresh() as Lit;
                // n <-> (x -> y)
                self.clauses.push(vec![-n, -x, y]);
                self.clauses.push(vec![n, x]);
                self.clauses.push(vec![n, -y]);
                n as usize
            }
        }
    }

    fn solve(&self) -> Option<Valuation> {
        let mut assignment = vec![None; self.vars + 1];
        if !self.search(&mut assignment) {
            return None;
        }
        Some(
            self.atom_vars
                .iter()
                .filter(|(_, v)| assignment[*v] == Some(true))
                .map(|(p, _)| *p)
                .collect(),
        )
    }

    fn value(assignment: &[Option<bool>], lit: Lit) -> Option<bool> {
        assignment[lit.unsigned_abs() as usize].map(|b| b == (lit > 0))
    }

    /// Unit propagation to a fixpoint. Returns false on a conflict.
    fn propagate(&self, assignment: &mut [Option<bool>], trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            for clause in &self.clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for &lit in clause {
                    match Self::value(assignment, lit) {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open += 1;
                            unassigned = Some(lit);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => return false,
                    (1, Some(lit)) => {
                        let var = lit.unsigned_abs() as usize;
                        assignment[var] = Some(lit > 0);
                        trail.push(var);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&self, assignment: &mut Vec<Option<bool>>) -> bool {
        let mut trail = Vec::new();
        if !self.propagate(assignment, &mut trail) {
            for v in trail {
                assignment[v] = None;
            }
            return false;
        }
        let Some(var) = (1..=self.vars).find(|v| assignment[*v].is_none()) else {
            return true;
        };
        for choice in [true, false] {
            assignment[var] = Some(choice);
            if self.search(assignment) {
                return true;
            }
            assignment[var] = None;
        }
        for v in trail {
            assignment[v] = None;
        }
        false
    }
}
