//! Several nodes receiving the same blocks in different orders.
//!
//! Block file: one block per line, `index formula`.
//!
//! Schedule file: an optional `I:` section with the shared background, one
//! classical formula per line, then a `nodes:` section with one node per
//! line. A node either lists the block line numbers it receives, in order,
//! or asks for a seeded shuffle of all blocks with some of them dropped:
//!
//! ```text
//! I:
//! P0 -> P1
//! nodes:
//! A: 1 2 3
//! B: 3 1
//! C: seed 7 drop 1
//! ```

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{initial_model, update_model_traced, CompletionTrace, Model};
use crate::propositional::{TheorySet, Valuation};
use crate::semantics::eval;
use crate::syntax::{parse_block, parse_classical, BcFormula, Block, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Positions (0-based) into the block list, in arrival order. Blocks
    /// not listed never arrive.
    Explicit(Vec<usize>),
    /// Every block in a shuffled order, minus the last `drop` of them.
    Seeded { seed: u64, drop: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeConfig {
    pub name: String,
    pub schedule: Schedule,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimulationConfig {
    pub background: TheorySet,
    pub nodes: Vec<NodeConfig>,
}

/// One delivery: `block` is the `sequence`-th arrival (0-based) at `node`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockEvent {
    pub node: String,
    pub sequence: usize,
    pub position: usize,
    pub block: Block,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub event: BlockEvent,
    pub trace: CompletionTrace,
    pub model: Model,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeReport {
    pub name: String,
    pub start: Model,
    pub steps: Vec<Step>,
}

impl NodeReport {
    pub fn final_model(&self) -> &Model {
        self.steps.last().map_or(&self.start, |s| &s.model)
    }

    /// The model before each step followed by the final model.
    pub fn models(&self) -> impl Iterator<Item = &Model> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.model))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationReport {
    pub nodes: Vec<NodeReport>,
}

impl SimulationReport {
    pub fn node(&self, name: &str) -> Option<&NodeReport> {
        self.nodes.iter().find(|n| n.name == name)
    }

    /// Whether every node ended with the same chain.
    pub fn converged(&self) -> bool {
        self.nodes.windows(2).all(|w| w[0].final_model().chain() == w[1].final_model().chain())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("the shared background is unsatisfiable")]
    InconsistentBackground,
    #[error("node {node}: there is no block number {number}")]
    NoSuchBlock { node: String, number: usize },
}

/// The positions a node receives, in order.
pub fn arrival_order(schedule: &Schedule, block_count: usize) -> Vec<usize> {
    match schedule {
        Schedule::Explicit(order) => order.clone(),
        Schedule::Seeded { seed, drop } => {
            let mut order: Vec<usize> = (0..block_count).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
            order.truncate(block_count.saturating_sub(*drop));
            order
        }
    }
}

/// Each node starts from the initial model with the shared background and
/// an empty chain, and applies its arrivals one at a time.
pub fn run_simulation(cfg: &SimulationConfig, blocks: &[Block]) -> Result<SimulationReport, SimError> {
    let start = initial_model(cfg.background.clone(), Vec::new(), Valuation::new())
        .map_err(|_| SimError::InconsistentBackground)?;
    let mut nodes = Vec::with_capacity(cfg.nodes.len());
    for node in &cfg.nodes {
        let order = arrival_order(&node.schedule, blocks.len());
        let mut model = start.clone();
        let mut steps = Vec::with_capacity(order.len());
        for (sequence, &position) in order.iter().enumerate() {
            let block = blocks
                .get(position)
                .ok_or_else(|| SimError::NoSuchBlock { node: node.name.clone(), number: position + 1 })?;
            let (next, trace) = update_model_traced(&model, block);
            log::debug!("node {}: {} -> chain length {}", node.name, block, next.len());
            model = next;
            steps.push(Step {
                event: BlockEvent { node: node.name.clone(), sequence, position, block: block.clone() },
                trace,
                model: model.clone(),
            });
        }
        nodes.push(NodeReport { name: node.name.clone(), start: start.clone(), steps });
    }
    Ok(SimulationReport { nodes })
}

pub fn knowledge_query(model: &Model, f: &BcFormula) -> bool {
    eval(model, f)
}

fn blocks_text(blocks: &[Block]) -> String {
    blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for SimulationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, node) in self.nodes.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            writeln!(f, "node {}", node.name)?;
            for step in &node.steps {
                let t = &step.trace;
                write!(f, "  {}. #{} {}", step.event.sequence + 1, step.event.position + 1, step.event.block)?;
                if !t.accepted.is_empty() {
                    write!(f, " | accepted {}", blocks_text(&t.accepted))?;
                }
                if !t.rejected_inconsistent.is_empty() {
                    write!(f, " | rejected {}", blocks_text(&t.rejected_inconsistent))?;
                }
                if !t.discarded_stale.is_empty() {
                    write!(f, " | discarded {}", blocks_text(&t.discarded_stale))?;
                }
                if t.removed() == 0 {
                    write!(f, " | pending")?;
                }
                writeln!(f)?;
            }
            write!(f, "{}", node.final_model())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimFileError {
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: SyntaxError },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

fn meaningful(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_blocks(text: &str) -> Result<Vec<Block>, SimFileError> {
    meaningful(text)
        .map(|(line, l)| parse_block(l).map_err(|source| SimFileError::Syntax { line, source }))
        .collect()
}

fn parse_schedule_line(body: &str, line: usize) -> Result<Schedule, SimFileError> {
    let bad = |message: &str| SimFileError::Format { line, message: message.to_string() };
    let words: Vec<&str> = body.split_whitespace().collect();
    if words.first() == Some(&"seed") {
        let number = |w: Option<&&str>| w.and_then(|w| w.parse().ok());
        let seed = number(words.get(1)).ok_or_else(|| bad("expected `seed <n>`"))?;
        let drop = match words.get(2..) {
            Some([]) | None => 0,
            Some(["drop", n]) => n.parse().map_err(|_| bad("expected `drop <n>`"))?,
            _ => return Err(bad("expected `seed <n> [drop <n>]`")),
        };
        return Ok(Schedule::Seeded { seed, drop });
    }
    words
        .iter()
        .map(|w| match w.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n - 1),
            _ => Err(bad(&format!("`{w}` is not a block number"))),
        })
        .collect::<Result<_, _>>()
        .map(Schedule::Explicit)
}

pub fn parse_schedule(text: &str) -> Result<SimulationConfig, SimFileError> {
    let mut cfg = SimulationConfig::default();
    let mut in_nodes = None;
    for (line, l) in meaningful(text) {
        if l == "I:" {
            in_nodes = Some(false);
            continue;
        }
        if l == "nodes:" {
            in_nodes = Some(true);
            continue;
        }
        match in_nodes {
            None => return Err(SimFileError::Format { line, message: "expected `I:` or `nodes:`".into() }),
            Some(false) => {
                cfg.background.insert(parse_classical(l).map_err(|source| SimFileError::Syntax { line, source })?);
            }
            Some(true) => {
                let (name, body) = l
                    .split_once(':')
                    .ok_or_else(|| SimFileError::Format { line, message: "expected `name: schedule`".into() })?;
                let name = name.trim();
                if name.is_empty() || cfg.nodes.iter().any(|n| n.name == name) {
                    return Err(SimFileError::Format { line, message: format!("bad or repeated node name `{name}`") });
                }
                cfg.nodes.push(NodeConfig { name: name.to_string(), schedule: parse_schedule_line(body, line)? });
            }
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn blocks(text: &str) -> Vec<Block> {
        parse_blocks(text).unwrap()
    }

    fn explicit(name: &str, order: &[usize]) -> NodeConfig {
        NodeConfig { name: name.into(), schedule: Schedule::Explicit(order.to_vec()) }
    }

    fn chain_of(report: &SimulationReport, node: &str) -> Vec<String> {
        report.node(node).unwrap().final_model().chain().iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn reversed_delivery_converges() {
        let bs = blocks("1 P0\n2 P1\n");
        let cfg = SimulationConfig { background: TheorySet::new(), nodes: vec![explicit("A", &[0, 1]), explicit("B", &[1, 0])] };
        let r = run_simulation(&cfg, &bs).unwrap();
        assert_eq!(chain_of(&r, "A"), ["P0", "P1"]);
        assert_eq!(chain_of(&r, "B"), ["P0", "P1"]);
        assert!(r.converged());
        let b = r.node("B").unwrap();
        assert_eq!(b.steps[0].model.pending().len(), 1);
        assert!(knowledge_query(b.final_model(), &parse_formula("Q2").unwrap()));
    }

    #[test]
    fn late_block_is_ignored() {
        let bs = blocks("1 P0\n1 not P0\n");
        let cfg = SimulationConfig { background: TheorySet::new(), nodes: vec![explicit("A", &[0, 1])] };
        let r = run_simulation(&cfg, &bs).unwrap();
        assert_eq!(chain_of(&r, "A"), ["P0"]);
        assert_eq!(r.nodes[0].steps[1].trace.discarded_stale.len(), 1);
    }

    #[test]
    fn competing_blocks_diverge() {
        let bs = blocks("1 P0\n1 not P0\n");
        let cfg = SimulationConfig { background: TheorySet::new(), nodes: vec![explicit("A", &[0, 1]), explicit("B", &[1, 0])] };
        let r = run_simulation(&cfg, &bs).unwrap();
        assert_eq!(chain_of(&r, "A"), ["P0"]);
        assert_eq!(chain_of(&r, "B"), ["not P0"]);
        assert!(!r.converged());
    }

    #[test]
    fn knowledge_examples() {
        let q = parse_formula("box P0").unwrap();
        let cfg = |order: &[usize]| SimulationConfig { background: TheorySet::new(), nodes: vec![explicit("A", order)] };
        let bs = blocks("1 P0\n");
        let r = run_simulation(&cfg(&[0]), &bs).unwrap();
        assert!(knowledge_query(r.nodes[0].final_model(), &q));
        let bs = blocks("2 P0\n1 P1\n");
        let r = run_simulation(&cfg(&[0]), &bs).unwrap();
        assert!(!knowledge_query(r.nodes[0].final_model(), &q));
        let r = run_simulation(&cfg(&[0, 1]), &bs).unwrap();
        assert!(knowledge_query(r.nodes[0].final_model(), &q));
    }

    #[test]
    fn seeded_schedules_are_reproducible() {
        let s = Schedule::Seeded { seed: 3, drop: 2 };
        let a = arrival_order(&s, 6);
        assert_eq!(a, arrival_order(&s, 6));
        assert_eq!(a.len(), 4);
        let mut sorted = a.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
    }

    #[test]
    fn schedule_file() {
        let cfg = parse_schedule("# two nodes\nI:\nP0 -> P1\nnodes:\nA: 1 2\nB: seed 7 drop 1\nC: seed 2\n").unwrap();
        assert_eq!(cfg.background.len(), 1);
        assert_eq!(cfg.nodes[0].schedule, Schedule::Explicit(vec![0, 1]));
        assert_eq!(cfg.nodes[1].schedule, Schedule::Seeded { seed: 7, drop: 1 });
        assert_eq!(cfg.nodes[2].schedule, Schedule::Seeded { seed: 2, drop: 0 });
        assert!(matches!(parse_schedule("A: 1\n"), Err(SimFileError::Format { line: 1, .. })));
        assert!(matches!(parse_schedule("nodes:\nA: 0\n"), Err(SimFileError::Format { line: 2, .. })));
        assert!(matches!(parse_schedule("nodes:\nA: 1\nA: 2\n"), Err(SimFileError::Format { line: 3, .. })));
        assert!(matches!(parse_schedule("nodes:\nA: seed x\n"), Err(SimFileError::Format { line: 2, .. })));
    }

    #[test]
    fn bad_block_number() {
        let cfg = SimulationConfig { background: TheorySet::new(), nodes: vec![explicit("A", &[4])] };
        assert_eq!(
            run_simulation(&cfg, &blocks("1 P0\n")),
            Err(SimError::NoSuchBlock { node: "A".into(), number: 5 })
        );
    }

    #[test]
    fn inconsistent_background() {
        let cfg = parse_schedule("I:\nbot\nnodes:\nA: 1\n").unwrap();
        assert_eq!(run_simulation(&cfg, &blocks("1 P0\n")), Err(SimError::InconsistentBackground));
    }
}
