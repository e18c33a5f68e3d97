//! Normal forms and the translation into the update-free fragment.

use std::fmt;

use crate::proofcheck::{a4, a6, AxiomName};
use crate::syntax::{acc_of, Atom, BcFormula, Block, ClassicalFormula, LengthAtom};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseCore {
    Falsum,
    P(Atom),
    Q(LengthAtom),
    Box(ClassicalFormula),
}

impl BaseCore {
    pub fn to_formula(&self) -> BcFormula {
        match self {
            BaseCore::Falsum => BcFormula::Falsum,
            BaseCore::P(p) => BcFormula::P(*p),
            BaseCore::Q(q) => BcFormula::Q(*q),
            BaseCore::Box(a) => BcFormula::Box(a.clone()),
        }
    }
}

/// `[i1,A1]...[im,Am]core`, with `m` possibly 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseFormula {
    pub prefix: Vec<Block>,
    pub core: BaseCore,
}

impl BaseFormula {
    pub fn to_formula(&self) -> BcFormula {
        BcFormula::under_prefix(&self.prefix, self.core.to_formula())
    }

    pub fn is_sorted(&self) -> bool {
        self.prefix.windows(2).all(|w| w[0].index() <= w[1].index())
    }
}

/// An implication tree over base formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormalForm {
    Base(BaseFormula),
    Implies(Box<NormalForm>, Box<NormalForm>),
}

impl NormalForm {
    pub fn to_formula(&self) -> BcFormula {
        match self {
            NormalForm::Base(b) => b.to_formula(),
            NormalForm::Implies(a, b) => BcFormula::implies(a.to_formula(), b.to_formula()),
        }
    }

    /// Whether every leaf prefix is in non-decreasing index order.
    pub fn is_sorted(&self) -> bool {
        match self {
            NormalForm::Base(b) => b.is_sorted(),
            NormalForm::Implies(a, b) => a.is_sorted() && b.is_sorted(),
        }
    }

    pub fn leaves(&self) -> Vec<&BaseFormula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            match n {
                NormalForm::Base(b) => out.push(b),
                NormalForm::Implies(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_formula().fmt(f)
    }
}

/// One rewrite: an axiom instance `L <-> R` whose left side was replaced by
/// its right side somewhere in the formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub axiom: AxiomName,
    pub instance: BcFormula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub normal_form: NormalForm,
    pub trace: Vec<RewriteStep>,
}

pub fn normalize(f: &BcFormula) -> NormalForm {
    normalize_traced(f).normal_form
}

/// Distributes update prefixes over implications, then sorts each leaf
/// prefix by index with a stable insertion sort of adjacent block swaps.
pub fn normalize_traced(f: &BcFormula) -> Normalization {
    let mut trace = Vec::new();
    let normal_form = distribute(&mut Vec::new(), f, &mut trace);
    Normalization { normal_form, trace }
}

fn distribute(prefix: &mut Vec<Block>, f: &BcFormula, trace: &mut Vec<RewriteStep>) -> NormalForm {
    match f {
        BcFormula::Update(b, inner) => {
            prefix.push(b.clone());
            let out = distribute(prefix, inner, trace);
            prefix.pop();
            out
        }
        BcFormula::Implies(a, b) => {
            if !prefix.is_empty() {
                trace.push(RewriteStep { axiom: AxiomName::A4, instance: a4(prefix, a, b) });
            }
            let lhs = distribute(prefix, a, trace);
            let rhs = distribute(prefix, b, trace);
            NormalForm::Implies(Box::new(lhs), Box::new(rhs))
        }
        BcFormula::Falsum => sort_leaf(prefix.clone(), BaseCore::Falsum, trace),
        BcFormula::P(p) => sort_leaf(prefix.clone(), BaseCore::P(*p), trace),
        BcFormula::Q(q) => sort_leaf(prefix.clone(), BaseCore::Q(*q), trace),
        BcFormula::Box(a) => sort_leaf(prefix.clone(), BaseCore::Box(a.clone()), trace),
    }
}

fn sort_leaf(mut prefix: Vec<Block>, core: BaseCore, trace: &mut Vec<RewriteStep>) -> NormalForm {
    let core_formula = core.to_formula();
    for k in 1..prefix.len() {
        let mut j = k;
        while j > 0 && prefix[j - 1].index() > prefix[j].index() {
            let rest = BcFormula::under_prefix(&prefix[j + 1..], core_formula.clone());
            let instance = a6(&prefix[..j - 1], &prefix[j - 1], &prefix[j], &rest)
                .expect("swapped blocks have different indices");
            trace.push(RewriteStep { axiom: AxiomName::A6, instance });
            prefix.swap(j - 1, j);
            j -= 1;
        }
    }
    NormalForm::Base(BaseFormula { prefix, core })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("`{0}` contains an update operator")]
    NotModal(BcFormula),
}

/// One application of `h`: `[block]before` became `after`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationStep {
    pub block: Block,
    pub before: BcFormula,
    pub after: BcFormula,
}

/// Eliminates a single update in front of an update-free formula.
pub fn h_step(block: &Block, g: &BcFormula) -> Result<BcFormula, ReductionError> {
    if !g.is_update_free() {
        return Err(ReductionError::NotModal(g.clone()));
    }
    let acc = acc_of(block);
    Ok(h(block, &acc, g))
}

fn h(block: &Block, acc: &BcFormula, g: &BcFormula) -> BcFormula {
    match g {
        BcFormula::Falsum | BcFormula::P(_) => g.clone(),
        BcFormula::Q(q) if q.index() == block.index() => BcFormula::or(acc.clone(), g.clone()),
        BcFormula::Q(_) => g.clone(),
        BcFormula::Implies(a, b) => BcFormula::implies(h(block, acc, a), h(block, acc, b)),
        BcFormula::Box(body) => BcFormula::or(
            BcFormula::and(
                acc.clone(),
                BcFormula::boxed(ClassicalFormula::implies(block.formula().clone(), body.clone())),
            ),
            BcFormula::and(BcFormula::not(acc.clone()), g.clone()),
        ),
        BcFormula::Update(..) => unreachable!("checked update-free"),
    }
}

pub fn translate(f: &BcFormula) -> BcFormula {
    translate_traced(f).0
}

/// `tr`, with every `h` application in the order performed. Equivalence
/// with the input holds only for compliant formulas; other inputs are
/// translated anyway and logged.
pub fn translate_traced(f: &BcFormula) -> (BcFormula, Vec<TranslationStep>) {
    if !f.is_compliant() {
        log::warn!("translating non-compliant formula {f}; the result need not be equivalent");
    }
    let mut steps = Vec::new();
    let out = tr(f, &mut steps);
    (out, steps)
}

fn tr(f: &BcFormula, steps: &mut Vec<TranslationStep>) -> BcFormula {
    match f {
        BcFormula::Falsum | BcFormula::P(_) | BcFormula::Q(_) | BcFormula::Box(_) => f.clone(),
        BcFormula::Implies(a, b) => BcFormula::implies(tr(a, steps), tr(b, steps)),
        BcFormula::Update(block, inner) => {
            let before = tr(inner, steps);
            let after = h(block, &acc_of(block), &before);
            steps.push(TranslationStep { block: block.clone(), before, after: after.clone() });
            after
        }
    }
}
