//! Seeded random generators for formulas, models, axiom instances and
//! derivations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{initial_model, Model};
use crate::proofcheck::{self, AxiomName, Derivation, Justification};
use crate::propositional::{is_satisfiable, is_tautology, TheorySet, Valuation};
use crate::syntax::{Atom, BcFormula, Block, ClassicalFormula, LengthAtom};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Atoms are drawn from `P0 .. P(atoms - 1)`.
    pub atoms: u64,
    /// Block and length indices are drawn from `1 ..= max_index`.
    pub max_index: u64,
    /// Nesting depth of connectives.
    pub depth: usize,
    /// Maximum number of updates along any path.
    pub max_prefix: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { atoms: 3, max_index: 4, depth: 3, max_prefix: 3 }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    pub bounds: Bounds,
}

impl Generator {
    pub fn new(seed: u64, bounds: Bounds) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed), bounds }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn atom(&mut self) -> Atom {
        Atom(self.rng.gen_range(0..self.bounds.atoms))
    }

    pub fn index(&mut self) -> u64 {
        self.rng.gen_range(1..=self.bounds.max_index)
    }

    pub fn length_atom(&mut self) -> LengthAtom {
        LengthAtom::new(self.index()).expect("indices start at 1")
    }

    pub fn classical(&mut self, depth: usize) -> ClassicalFormula {
        let leaf = depth == 0 || self.rng.gen_bool(0.3);
        if leaf {
            return if self.rng.gen_bool(0.1) {
                ClassicalFormula::Falsum
            } else {
                ClassicalFormula::Atom(self.atom())
            };
        }
        match self.rng.gen_range(0..4) {
            0 => ClassicalFormula::not(self.classical(depth - 1)),
            1 => ClassicalFormula::and(self.classical(depth - 1), self.classical(depth - 1)),
            2 => ClassicalFormula::or(self.classical(depth - 1), self.classical(depth - 1)),
            _ => ClassicalFormula::implies(self.classical(depth - 1), self.classical(depth - 1)),
        }
    }

    /// A classical formula of depth at most 2, the shape used for block
    /// and box bodies.
    pub fn small_classical(&mut self) -> ClassicalFormula {
        self.classical(2)
    }

    pub fn block(&mut self) -> Block {
        let i = self.index();
        self.block_at(i)
    }

    pub fn block_at(&mut self, index: u64) -> Block {
        Block::new(index, self.small_classical()).expect("indices start at 1")
    }

    fn leaf(&mut self) -> BcFormula {
        match self.rng.gen_range(0..10) {
            0 => BcFormula::Falsum,
            1..=3 => BcFormula::P(self.atom()),
            4..=6 => BcFormula::Q(self.length_atom()),
            _ => BcFormula::boxed(self.small_classical()),
        }
    }

    /// A formula of the full language. Update indices are unconstrained.
    pub fn formula(&mut self) -> BcFormula {
        let (depth, prefix) = (self.bounds.depth, self.bounds.max_prefix);
        self.bc(depth, prefix, None)
    }

    /// A compliant formula: along every path, update indices never
    /// decrease from the outside in.
    pub fn compliant(&mut self) -> BcFormula {
        let (depth, prefix) = (self.bounds.depth, self.bounds.max_prefix);
        self.bc(depth, prefix, Some(1))
    }

    /// An update-free formula.
    pub fn modal(&mut self) -> BcFormula {
        let depth = self.bounds.depth;
        self.bc(depth, 0, None)
    }

    fn bc(&mut self, depth: usize, updates_left: usize, floor: Option<u64>) -> BcFormula {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.leaf();
        }
        let update = updates_left > 0 && floor.is_none_or(|f| f <= self.bounds.max_index) && self.rng.gen_bool(0.35);
        if update {
            let index = match floor {
                Some(f) => self.rng.gen_range(f..=self.bounds.max_index),
                None => self.index(),
            };
            let b = self.block_at(index);
            let inner = self.bc(depth - 1, updates_left - 1, floor.map(|_| index));
            return BcFormula::update(b, inner);
        }
        match self.rng.gen_range(0..5) {
            0 => BcFormula::not(self.bc(depth - 1, updates_left, floor)),
            1 => BcFormula::and(self.bc(depth - 1, updates_left, floor), self.bc(depth - 1, updates_left, floor)),
            2 => BcFormula::or(self.bc(depth - 1, updates_left, floor), self.bc(depth - 1, updates_left, floor)),
            _ => BcFormula::implies(self.bc(depth - 1, updates_left, floor), self.bc(depth - 1, updates_left, floor)),
        }
    }

    pub fn prefix(&mut self) -> Vec<Block> {
        let n = self.rng.gen_range(0..=self.bounds.max_prefix);
        (0..n).map(|_| self.block()).collect()
    }

    pub fn valuation(&mut self) -> Valuation {
        (0..self.bounds.atoms)
            .filter(|_| self.rng.gen_bool(0.5))
            .map(Atom)
            .collect()
    }

    /// A satisfiable background of up to two formulas.
    pub fn background(&mut self) -> TheorySet {
        loop {
            let n = self.rng.gen_range(0..=2);
            let set: TheorySet = (0..n).map(|_| self.small_classical()).collect();
            if set.is_satisfiable().is_some() {
                return set;
            }
        }
    }

    /// A chain of up to `max_len` formulas consistent with `background`.
    pub fn chain_for(&mut self, background: &TheorySet, max_len: usize) -> Vec<ClassicalFormula> {
        let len = self.rng.gen_range(0..=max_len);
        let mut chain: Vec<ClassicalFormula> = Vec::new();
        while chain.len() < len {
            let a = self.small_classical();
            if is_satisfiable(background.iter().chain(&chain).chain([&a])).is_some() {
                chain.push(a);
            }
        }
        chain
    }

    pub fn initial_model(&mut self) -> Model {
        let background = self.background();
        let chain = self.chain_for(&background, self.bounds.max_index as usize);
        let valuation = self.valuation();
        initial_model(background, chain, valuation).expect("background and chain are consistent")
    }

    /// A model that may carry provisional updates.
    pub fn model(&mut self) -> Model {
        let (background, chain, pending) = self.completion_input();
        let valuation = self.valuation();
        let done = crate::chain::complete(&background, &chain, &pending).expect("precondition holds");
        Model::new(background, done.chain, done.pending, valuation).expect("completion keeps the model conditions")
    }

    /// `(I, BC, PU)` with `I` and `BC` jointly satisfiable; `PU` is
    /// unrestricted.
    pub fn completion_input(&mut self) -> (TheorySet, Vec<ClassicalFormula>, Vec<Block>) {
        let background = self.background();
        let chain = self.chain_for(&background, 3);
        let n = self.rng.gen_range(0..=5);
        let top = chain.len() as u64 + 4;
        let pending = (0..n)
            .map(|_| {
                let i = self.rng.gen_range(1..=top);
                self.block_at(i)
            })
            .collect();
        (background, chain, pending)
    }

    /// A random instance of the named schema.
    pub fn axiom_instance(&mut self, name: AxiomName) -> BcFormula {
        match name {
            AxiomName::PT => self.tautology_instance(),
            AxiomName::K => {
                let (a, b) = (self.small_classical(), self.small_classical());
                proofcheck::k(&a, &b)
            }
            AxiomName::D => proofcheck::d(),
            AxiomName::Q => {
                let i = self.rng.gen_range(2..=self.bounds.max_index.max(2));
                let j = self.rng.gen_range(1..i);
                proofcheck::q(i, j).expect("i > j >= 1")
            }
            AxiomName::A1 => proofcheck::a1(&self.block()),
            AxiomName::A2 => {
                let (b, p) = (self.block(), self.atom());
                proofcheck::a2(&b, p)
            }
            AxiomName::A3_1 => proofcheck::a3_1(&self.block()),
            AxiomName::A3_2 => proofcheck::a3_2(&self.block()),
            AxiomName::A3_3 => {
                let b = self.block();
                let j = loop {
                    let j = self.length_atom();
                    if j.index() != b.index() || self.bounds.max_index == 1 {
                        break j;
                    }
                };
                proofcheck::a3_3(&b, j).unwrap_or_else(|| proofcheck::a1(&b))
            }
            AxiomName::A4 => {
                let prefix = self.prefix();
                let (f, g) = (self.compliant_small(), self.compliant_small());
                proofcheck::a4(&prefix, &f, &g)
            }
            AxiomName::A5_1 => {
                let (b, body) = (self.block(), self.small_classical());
                proofcheck::a5_1(&b, &body)
            }
            AxiomName::A5_2 => {
                let (b, body) = (self.block(), self.small_classical());
                proofcheck::a5_2(&b, &body)
            }
            AxiomName::A6 => {
                let n = self.rng.gen_range(0..=self.bounds.max_prefix.saturating_sub(2));
                let prefix: Vec<Block> = (0..n).map(|_| self.block()).collect();
                let first = self.block();
                let second = loop {
                    let b = self.block();
                    if b.index() != first.index() {
                        break b;
                    }
                };
                let f = self.compliant_small();
                proofcheck::a6(&prefix, &first, &second, &f).expect("indices differ")
            }
        }
    }

    /// A small formula with at most one update, used inside schema slots.
    fn compliant_small(&mut self) -> BcFormula {
        self.bc(2, 1, Some(1))
    }

    /// A substitution instance of a propositional tautology. The tautology
    /// is found by rejection sampling over three variables, falling back to
    /// a fixed list; each variable is replaced by a random formula.
    pub fn tautology_instance(&mut self) -> BcFormula {
        let skeleton = self.tautology_skeleton();
        let fillers: Vec<BcFormula> = (0..3).map(|_| self.compliant_small()).collect();
        substitute(&skeleton, &fillers)
    }

    fn tautology_skeleton(&mut self) -> ClassicalFormula {
        let saved = self.bounds.atoms;
        self.bounds.atoms = 3;
        let found = (0..20).map(|_| self.classical(3)).find(|s| is_tautology(s) && s.size() > 1);
        self.bounds.atoms = saved;
        found.unwrap_or_else(|| {
            let p = |i| ClassicalFormula::atom(i);
            let imp = ClassicalFormula::implies;
            let templates = [
                imp(p(0), p(0)),
                imp(p(0), imp(p(1), p(0))),
                imp(imp(p(0), imp(p(1), p(2))), imp(imp(p(0), p(1)), imp(p(0), p(2)))),
                imp(imp(imp(p(0), p(1)), p(0)), p(0)),
                imp(ClassicalFormula::not(ClassicalFormula::not(p(0))), p(0)),
                ClassicalFormula::or(p(0), ClassicalFormula::not(p(0))),
            ];
            templates.choose(&mut self.rng).expect("nonempty").clone()
        })
    }

    /// A short checked derivation: an axiom instance, a weakening by
    /// `PT`, one modus ponens, and a necessitation of a classical
    /// tautology.
    pub fn derivation(&mut self) -> Derivation {
        let mut d = Derivation::new();
        let name = *AxiomName::ALL.choose(&mut self.rng).expect("nonempty");
        let f = self.axiom_instance(name);
        let l1 = d.push(f.clone(), Justification::Axiom(name));
        let g = self.compliant_small();
        let weakening = BcFormula::implies(f.clone(), BcFormula::implies(g.clone(), f.clone()));
        let l2 = d.push(weakening, Justification::Axiom(AxiomName::PT));
        d.push(BcFormula::implies(g, f), Justification::MP(l1, l2));
        let a = self.small_classical();
        let taut = ClassicalFormula::implies(a.clone(), a);
        let l4 = d.push(taut.to_bc(), Justification::Axiom(AxiomName::PT));
        d.push(BcFormula::boxed(taut), Justification::Nec(l4));
        d
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.rng);
    }
}

/// Replaces atom `Pk` of `skeleton` by `fillers[k]`.
pub fn substitute(skeleton: &ClassicalFormula, fillers: &[BcFormula]) -> BcFormula {
    match skeleton {
        ClassicalFormula::Falsum => BcFormula::Falsum,
        ClassicalFormula::Atom(p) => fillers[p.0 as usize].clone(),
        ClassicalFormula::Implies(a, b) => BcFormula::implies(substitute(a, fillers), substitute(b, fillers)),
    }
}
