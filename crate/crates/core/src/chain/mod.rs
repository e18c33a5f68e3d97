//! Blockchain models and their dynamics.
//!
//! A [`Model`] holds background knowledge, the chain of accepted formulas,
//! the blocks that arrived too early, and a valuation. Receiving a block
//! appends it to the pending list and runs [`complete`], which pulls every
//! block that now fits onto the chain and discards blocks that can never fit.

mod format;

use std::fmt;

pub use format::{parse_model_text, ModelSpec, ModelTextError};

use crate::propositional::{is_satisfiable, TheorySet, Valuation};
use crate::syntax::{Block, ClassicalFormula};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("background and chain are jointly unsatisfiable")]
    Inconsistent,
    #[error("pending block {block} has index at most len(chain) + 1 = {limit}")]
    PendingTooLow { block: Block, limit: usize },
    #[error("position {pos} is out of range for a sequence of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
}

/// A model `(I, BC, PU, v)`.
///
/// Construction enforces that `I` together with the chain is satisfiable
/// and that every pending block has index greater than `len(BC) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    background: TheorySet,
    chain: Vec<ClassicalFormula>,
    pending: Vec<Block>,
    valuation: Valuation,
}

impl Model {
    pub fn new(
        background: TheorySet,
        chain: Vec<ClassicalFormula>,
        pending: Vec<Block>,
        valuation: Valuation,
    ) -> Result<Self, ChainError> {
        if is_satisfiable(background.iter().chain(&chain)).is_none() {
            return Err(ChainError::Inconsistent);
        }
        let limit = chain.len() + 1;
        if let Some(block) = pending.iter().find(|b| b.index() <= limit as u64) {
            return Err(ChainError::PendingTooLow { block: block.clone(), limit });
        }
        Ok(Model { background, chain, pending, valuation })
    }

    pub fn background(&self) -> &TheorySet {
        &self.background
    }

    pub fn chain(&self) -> &[ClassicalFormula] {
        &self.chain
    }

    pub fn pending(&self) -> &[Block] {
        &self.pending
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn is_initial(&self) -> bool {
        self.pending.is_empty()
    }

    /// `I ∪ set(BC)`: everything currently believed.
    pub fn beliefs(&self) -> impl Iterator<Item = &ClassicalFormula> {
        self.background.iter().chain(&self.chain)
    }

    /// Same model without provisional updates.
    pub fn without_pending(&self) -> Model {
        Model { pending: Vec::new(), ..self.clone() }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "I:")?;
        for a in self.background.iter() {
            writeln!(f, "{a}")?;
        }
        writeln!(f, "BC:")?;
        for a in &self.chain {
            writeln!(f, "{a}")?;
        }
        writeln!(f, "PU:")?;
        for b in &self.pending {
            writeln!(f, "{} {}", b.index(), b.formula())?;
        }
        write!(f, "V:")?;
        for p in self.valuation.atoms() {
            write!(f, " {p}")?;
        }
        writeln!(f)
    }
}

/// A model without provisional updates.
pub fn initial_model(
    background: TheorySet,
    chain: Vec<ClassicalFormula>,
    valuation: Valuation,
) -> Result<Model, ChainError> {
    Model::new(background, chain, Vec::new(), valuation)
}

/// Least 1-based position of a block with the given index.
pub fn find(index: u64, pending: &[Block]) -> Option<usize> {
    pending.iter().position(|b| b.index() == index).map(|j| j + 1)
}

/// The sequence without its `pos`-th (1-based) component.
pub fn remove<T: Clone>(pos: usize, seq: &[T]) -> Result<Vec<T>, ChainError> {
    if pos == 0 || pos > seq.len() {
        return Err(ChainError::PositionOutOfRange { pos, len: seq.len() });
    }
    let mut out = seq.to_vec();
    out.remove(pos - 1);
    Ok(out)
}

/// What one completion run did with each block it took out of pending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CompletionTrace {
    pub accepted: Vec<Block>,
    pub rejected_inconsistent: Vec<Block>,
    pub discarded_stale: Vec<Block>,
}

impl CompletionTrace {
    pub fn removed(&self) -> usize {
        self.accepted.len() + self.rejected_inconsistent.len() + self.discarded_stale.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub chain: Vec<ClassicalFormula>,
    pub pending: Vec<Block>,
    pub trace: CompletionTrace,
}

/// State at the head of each iteration of the completion while-loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopState {
    pub next_index: usize,
    pub chain_len: usize,
    pub pending_len: usize,
}

/// Chain completion. Requires `background ∪ set(chain)` to be satisfiable.
pub fn complete(
    background: &TheorySet,
    chain: &[ClassicalFormula],
    pending: &[Block],
) -> Result<Completion, ChainError> {
    complete_observed(background, chain, pending, |_| {})
}

/// [`complete`], reporting the loop state before every while-iteration test.
pub fn complete_observed(
    background: &TheorySet,
    chain: &[ClassicalFormula],
    pending: &[Block],
    observe: impl FnMut(LoopState),
) -> Result<Completion, ChainError> {
    if is_satisfiable(background.iter().chain(chain)).is_none() {
        return Err(ChainError::Inconsistent);
    }
    Ok(complete_unchecked(background, chain.to_vec(), pending.to_vec(), observe))
}

fn complete_unchecked(
    background: &TheorySet,
    mut chain: Vec<ClassicalFormula>,
    mut pending: Vec<Block>,
    mut observe: impl FnMut(LoopState),
) -> Completion {
    let mut trace = CompletionTrace::default();
    let mut n = chain.len() + 1;
    loop {
        observe(LoopState { next_index: n, chain_len: chain.len(), pending_len: pending.len() });
        let Some(pos) = find(n as u64, &pending) else {
            break;
        };
        let block = pending.remove(pos - 1);
        let consistent = is_satisfiable(
            background.iter().chain(&chain).chain(std::iter::once(block.formula())),
        )
        .is_some();
        if consistent {
            chain.push(block.formula().clone());
            n = chain.len() + 1;
            trace.accepted.push(block);
        } else {
            trace.rejected_inconsistent.push(block);
        }
    }
    // from the back, so removals never shift positions still to be visited
    for i in (0..pending.len()).rev() {
        if pending[i].index() < n as u64 {
            trace.discarded_stale.push(pending.remove(i));
        }
    }
    Completion { chain, pending, trace }
}

/// The updated model `M^[i,A]`.
pub fn update_model(model: &Model, block: &Block) -> Model {
    update_model_traced(model, block).0
}

/// [`update_model`] together with what the completion run did.
pub fn update_model_traced(model: &Model, block: &Block) -> (Model, CompletionTrace) {
    let mut pending = model.pending.clone();
    pending.push(block.clone());
    let done = complete_unchecked(&model.background, model.chain.clone(), pending, |_| {});
    let updated = Model {
        background: model.background.clone(),
        chain: done.chain,
        pending: done.pending,
        valuation: model.valuation.clone(),
    };
    (updated, done.trace)
}
