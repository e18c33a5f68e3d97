//! Deciding validity over initial models.
//!
//! An update-free formula only sees three things of an initial model: which
//! of its length atoms hold, which of its box bodies are believed, and the
//! valuation of its world atoms. [`decide_modal`] enumerates those
//! combinations that some initial model realises and evaluates the formula
//! on all of them at once, one bit per valuation and length class.

use std::collections::HashMap;

use crate::chain::{initial_model, Model};
use crate::propositional::{AtomOrder, TheorySet, TruthTable, Valuation};
use crate::reduction::{normalize, translate};
use crate::semantics::eval;
use crate::syntax::{Atom, BcFormula, ClassicalFormula};

/// Inputs above these sizes are rejected by [`decide_modal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeLimits {
    pub world_atoms: usize,
    pub body_atoms: usize,
    pub box_classes: usize,
}

impl Default for SizeLimits {
    fn default() -> Self {
        SizeLimits { world_atoms: 14, body_atoms: 16, box_classes: 24 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("`{0}` contains an update operator")]
    NotModal(BcFormula),
    #[error("too many {what}: {count} (limit {limit})")]
    TooLarge { what: &'static str, count: usize, limit: usize },
    #[error("materialised countermodel does not falsify the formula:\n{0}")]
    CountermodelMismatch(Model),
}

/// A combination of truth values an update-free formula can observe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModalScenario {
    /// The occurring length indices assigned true; always a prefix of the
    /// sorted occurring indices.
    pub true_lengths: Vec<u64>,
    /// The occurring box bodies assigned true.
    pub box_true: Vec<ClassicalFormula>,
    pub world: Valuation,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScenarioStats {
    pub length_classes: usize,
    pub box_classes: usize,
    pub realizable_box_sets: usize,
    pub valuations: usize,
    /// Scenarios actually evaluated before the verdict was known.
    pub scenarios: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub countermodel: Option<Model>,
    pub scenario: Option<ModalScenario>,
    pub stats: ScenarioStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Falsum,
    P(usize),
    Q(usize),
    Box(usize),
    Implies(usize, usize),
}

/// The formula as a hash-consed DAG, with atoms numbered.
struct Plan {
    nodes: Vec<Node>,
    world: Vec<Atom>,
    lengths: Vec<u64>,
    bodies: Vec<ClassicalFormula>,
    body_tables: Vec<TruthTable>,
    body_rows: TruthTable,
}

struct Builder<'a> {
    nodes: Vec<Node>,
    interned: HashMap<Node, usize>,
    seen: HashMap<*const BcFormula, usize>,
    world: Vec<Atom>,
    lengths: Vec<u64>,
    order: &'a AtomOrder,
    bodies: Vec<ClassicalFormula>,
    body_tables: Vec<TruthTable>,
    body_index: HashMap<TruthTable, usize>,
}

impl Builder<'_> {
    fn intern(&mut self, node: Node) -> usize {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        self.nodes.push(node);
        self.interned.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn visit(&mut self, f: &BcFormula) -> usize {
        let key = f as *const BcFormula;
        if let Some(&id) = self.seen.get(&key) {
            return id;
        }
        let node = match f {
            BcFormula::Falsum => Node::Falsum,
            BcFormula::P(p) => Node::P(self.world.binary_search(p).expect("world atoms collected")),
            BcFormula::Q(q) => {
                Node::Q(self.lengths.binary_search(&q.index()).expect("length atoms collected"))
            }
            BcFormula::Box(body) => {
                let table = self.order.truth_table(body);
                let next = self.bodies.len();
                let id = *self.body_index.entry(table.clone()).or_insert(next);
                if id == next {
                    self.bodies.push(body.clone());
                    self.body_tables.push(table);
                }
                Node::Box(id)
            }
            BcFormula::Implies(a, b) => {
                let a = self.visit(a);
                let b = self.visit(b);
                Node::Implies(a, b)
            }
            BcFormula::Update(..) => unreachable!("checked update-free"),
        };
        let id = self.intern(node);
        self.seen.insert(key, id);
        id
    }
}

fn sorted_dedup<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v.dedup();
    v
}

fn plan(g: &BcFormula, limits: &SizeLimits) -> Result<Plan, DecideError> {
    let world = sorted_dedup(g.world_atoms());
    let lengths = sorted_dedup(g.length_atoms().into_iter().map(|q| q.index()).collect());
    let bodies = g.box_bodies();
    let order = AtomOrder::of(bodies.iter().copied());
    let check = |what, count, limit| {
        if count > limit {
            Err(DecideError::TooLarge { what, count, limit })
        } else {
            Ok(())
        }
    };
    check("world atoms", world.len(), limits.world_atoms)?;
    check("atoms under box", order.len(), limits.body_atoms)?;
    let mut b = Builder {
        nodes: Vec::new(),
        interned: HashMap::new(),
        seen: HashMap::new(),
        world,
        lengths,
        order: &order,
        bodies: Vec::new(),
        body_tables: Vec::new(),
        body_index: HashMap::new(),
    };
    let root = b.visit(g);
    debug_assert_eq!(root, b.nodes.len() - 1);
    check("distinct box bodies", b.bodies.len(), limits.box_classes)?;
    Ok(Plan {
        nodes: b.nodes,
        world: b.world,
        lengths: b.lengths,
        bodies: b.bodies,
        body_tables: b.body_tables,
        body_rows: order.full_table(),
    })
}

/// Bit lanes: lane `c * 2^w + v` is length class `c` (the first `c`
/// occurring indices true) with valuation row `v` over the world atoms.
struct Lanes {
    words: usize,
    lanes: usize,
    world_rows: usize,
}

impl Lanes {
    fn new(world: usize, classes: usize) -> Self {
        let world_rows = 1usize << world;
        let lanes = world_rows * classes;
        Lanes { words: lanes.div_ceil(64), lanes, world_rows }
    }

    fn filled(&self, bit: impl Fn(usize) -> bool) -> Vec<u64> {
        let mut out = vec![0u64; self.words];
        for lane in 0..self.lanes {
            if bit(lane) {
                out[lane / 64] |= 1 << (lane % 64);
            }
        }
        out
    }

    fn first_zero(&self, bits: &[u64]) -> Option<usize> {
        (0..self.lanes).find(|&lane| bits[lane / 64] & (1 << (lane % 64)) == 0)
    }
}

struct Evaluator<'p> {
    plan: &'p Plan,
    lanes: Lanes,
    p_bits: Vec<Vec<u64>>,
    q_bits: Vec<Vec<u64>>,
    ones: Vec<u64>,
}

impl<'p> Evaluator<'p> {
    fn new(plan: &'p Plan) -> Self {
        let lanes = Lanes::new(plan.world.len(), plan.lengths.len() + 1);
        let rows = lanes.world_rows;
        let p_bits = (0..plan.world.len()).map(|k| lanes.filled(|lane| (lane % rows) >> k & 1 == 1)).collect();
        // Q_k (k-th smallest occurring index) holds in class c iff k < c
        let q_bits = (0..plan.lengths.len()).map(|k| lanes.filled(|lane| k < lane / rows)).collect();
        let ones = lanes.filled(|_| true);
        Evaluator { plan, lanes, p_bits, q_bits, ones }
    }

    /// The root's lanes when exactly the box classes in `box_true` hold.
    fn run(&self, box_true: &[bool]) -> Vec<u64> {
        let zeros = vec![0u64; self.lanes.words];
        let mut values: Vec<Vec<u64>> = Vec::with_capacity(self.plan.nodes.len());
        for node in &self.plan.nodes {
            let v = match *node {
                Node::Falsum => zeros.clone(),
                Node::P(k) => self.p_bits[k].clone(),
                Node::Q(k) => self.q_bits[k].clone(),
                Node::Box(k) => if box_true[k] { self.ones.clone() } else { zeros.clone() },
                Node::Implies(a, b) => values[a]
                    .iter()
                    .zip(&values[b])
                    .zip(&self.ones)
                    .map(|((x, y), m)| (!x | y) & m)
                    .collect(),
            };
            values.push(v);
        }
        values.pop().expect("plan has a root")
    }
}

/// Depth-first enumeration of realizable box sets. `in_set[k]` says whether
/// class `k` is believed; the believed rows `w` must stay nonempty and must
/// not fall inside any excluded class.
fn realizable_sets(tables: &[TruthTable], all_rows: &TruthTable, visit: &mut impl FnMut(&[bool]) -> bool) {
    fn go(
        k: usize,
        w: &TruthTable,
        in_set: &mut Vec<bool>,
        tables: &[TruthTable],
        visit: &mut impl FnMut(&[bool]) -> bool,
    ) -> bool {
        if k == tables.len() {
            return visit(in_set);
        }
        if !w.is_subset_of(&tables[k]) {
            in_set.push(false);
            let go_on = go(k + 1, w, in_set, tables, visit);
            in_set.pop();
            if !go_on {
                return false;
            }
        }
        let mut narrowed = w.clone();
        narrowed.intersect_with(&tables[k]);
        let excluded_ok = in_set
            .iter()
            .zip(tables)
            .all(|(&inside, t)| inside || !narrowed.is_subset_of(t));
        if !narrowed.is_empty() && excluded_ok {
            in_set.push(true);
            let go_on = go(k + 1, &narrowed, in_set, tables, visit);
            in_set.pop();
            return go_on;
        }
        true
    }
    go(0, all_rows, &mut Vec::new(), tables, visit);
}

pub fn decide_modal(g: &BcFormula) -> Result<Verdict, DecideError> {
    decide_modal_with(g, &SizeLimits::default())
}

pub fn decide_modal_with(g: &BcFormula, limits: &SizeLimits) -> Result<Verdict, DecideError> {
    if !g.is_update_free() {
        return Err(DecideError::NotModal(g.clone()));
    }
    let plan = plan(g, limits)?;
    let eval_plan = Evaluator::new(&plan);
    let mut stats = ScenarioStats {
        length_classes: plan.lengths.len() + 1,
        box_classes: plan.bodies.len(),
        valuations: eval_plan.lanes.world_rows,
        ..Default::default()
    };
    let mut failure: Option<(Vec<bool>, usize)> = None;
    realizable_sets(&plan.body_tables, &plan.body_rows, &mut |in_set| {
        stats.realizable_box_sets += 1;
        let root = eval_plan.run(in_set);
        match eval_plan.lanes.first_zero(&root) {
            Some(lane) => {
                stats.scenarios += lane as u64 + 1;
                failure = Some((in_set.to_vec(), lane));
                false
            }
            None => {
                stats.scenarios += eval_plan.lanes.lanes as u64;
                true
            }
        }
    });
    let Some((in_set, lane)) = failure else {
        return Ok(Verdict { valid: true, countermodel: None, scenario: None, stats });
    };

    let rows = eval_plan.lanes.world_rows;
    let (class, row) = (lane / rows, lane % rows);
    let world: Valuation = plan
        .world
        .iter()
        .enumerate()
        .filter(|(k, _)| row >> k & 1 == 1)
        .map(|(_, p)| *p)
        .collect();
    let box_true: Vec<ClassicalFormula> = plan
        .bodies
        .iter()
        .zip(&in_set)
        .filter(|(_, &inside)| inside)
        .map(|(b, _)| b.clone())
        .collect();
    let true_lengths = plan.lengths[..class].to_vec();
    let len = true_lengths.last().copied().unwrap_or(0) as usize;
    let background: TheorySet = box_true.iter().cloned().collect();
    let model = initial_model(background, vec![ClassicalFormula::top(); len], world.clone())
        .expect("realizable box sets are satisfiable");
    if eval(&model, g) {
        return Err(DecideError::CountermodelMismatch(model));
    }
    Ok(Verdict {
        valid: false,
        countermodel: Some(model),
        scenario: Some(ModalScenario { true_lengths, box_true, world }),
        stats,
    })
}

/// Normalises, translates, and decides the result. A countermodel is
/// checked against `f` itself before it is returned.
pub fn decide(f: &BcFormula) -> Result<Verdict, DecideError> {
    decide_with(f, &SizeLimits::default())
}

pub fn decide_with(f: &BcFormula, limits: &SizeLimits) -> Result<Verdict, DecideError> {
    let g = normalize(f).to_formula();
    let h = translate(&g);
    let verdict = decide_modal_with(&h, limits)?;
    if let Some(m) = &verdict.countermodel {
        if eval(m, f) {
            return Err(DecideError::CountermodelMismatch(m.clone()));
        }
    }
    Ok(verdict)
}
