//! The axiom schemas: instance builders and recognisers.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::propositional::is_tautology;
use crate::syntax::{acc_of, Atom, BcFormula, Block, ClassicalFormula, LengthAtom};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomName {
    PT,
    K,
    D,
    Q,
    A1,
    A2,
    A3_1,
    A3_2,
    A3_3,
    A4,
    A5_1,
    A5_2,
    A6,
}

impl AxiomName {
    pub const ALL: [AxiomName; 13] = [
        AxiomName::PT,
        AxiomName::K,
        AxiomName::D,
        AxiomName::Q,
        AxiomName::A1,
        AxiomName::A2,
        AxiomName::A3_1,
        AxiomName::A3_2,
        AxiomName::A3_3,
        AxiomName::A4,
        AxiomName::A5_1,
        AxiomName::A5_2,
        AxiomName::A6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomName::PT => "PT",
            AxiomName::K => "K",
            AxiomName::D => "D",
            AxiomName::Q => "Q",
            AxiomName::A1 => "A1",
            AxiomName::A2 => "A2",
            AxiomName::A3_1 => "A3.1",
            AxiomName::A3_2 => "A3.2",
            AxiomName::A3_3 => "A3.3",
            AxiomName::A4 => "A4",
            AxiomName::A5_1 => "A5.1",
            AxiomName::A5_2 => "A5.2",
            AxiomName::A6 => "A6",
        }
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown axiom `{0}`")]
pub struct UnknownAxiom(pub String);

impl FromStr for AxiomName {
    type Err = UnknownAxiom;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomName::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| UnknownAxiom(s.to_string()))
    }
}

fn update(b: &Block, inner: BcFormula) -> BcFormula {
    BcFormula::update(b.clone(), inner)
}

fn q_of(b: &Block) -> BcFormula {
    BcFormula::Q(LengthAtom::new(b.index()).expect("block indices are positive"))
}

/// `box (A -> B) -> (box A -> box B)`
pub fn k(a: &ClassicalFormula, b: &ClassicalFormula) -> BcFormula {
    BcFormula::implies(
        BcFormula::boxed(ClassicalFormula::implies(a.clone(), b.clone())),
        BcFormula::implies(BcFormula::boxed(a.clone()), BcFormula::boxed(b.clone())),
    )
}

/// `not box bot`
pub fn d() -> BcFormula {
    BcFormula::not(BcFormula::boxed(ClassicalFormula::Falsum))
}

/// `Qi -> Qj`; `None` unless `i > j >= 1`.
pub fn q(i: u64, j: u64) -> Option<BcFormula> {
    (i > j && j >= 1).then(|| BcFormula::implies(BcFormula::q(i), BcFormula::q(j)))
}

/// `[i,A]bot -> bot`
pub fn a1(b: &Block) -> BcFormula {
    BcFormula::implies(update(b, BcFormula::Falsum), BcFormula::Falsum)
}

/// `[i,A]P <-> P`
pub fn a2(b: &Block, p: Atom) -> BcFormula {
    BcFormula::iff(update(b, BcFormula::P(p)), BcFormula::P(p))
}

/// `Acc(i,A) -> ([i,A]Qi <-> top)`
pub fn a3_1(b: &Block) -> BcFormula {
    BcFormula::implies(acc_of(b), BcFormula::iff(update(b, q_of(b)), BcFormula::top()))
}

/// `not Acc(i,A) -> ([i,A]Qi <-> Qi)`
pub fn a3_2(b: &Block) -> BcFormula {
    BcFormula::implies(
        BcFormula::not(acc_of(b)),
        BcFormula::iff(update(b, q_of(b)), q_of(b)),
    )
}

/// `[i,A]Qj <-> Qj`; `None` when `i = j`.
pub fn a3_3(b: &Block, j: LengthAtom) -> Option<BcFormula> {
    (b.index() != j.index()).then(|| BcFormula::iff(update(b, BcFormula::Q(j)), BcFormula::Q(j)))
}

/// `p(F -> G) <-> (pF -> pG)` for an update prefix `p`.
pub fn a4(prefix: &[Block], f: &BcFormula, g: &BcFormula) -> BcFormula {
    let wrap = |x: BcFormula| BcFormula::under_prefix(prefix, x);
    BcFormula::iff(
        wrap(BcFormula::implies(f.clone(), g.clone())),
        BcFormula::implies(wrap(f.clone()), wrap(g.clone())),
    )
}

/// `Acc(i,A) -> ([i,A]box B <-> box (A -> B))`
pub fn a5_1(b: &Block, body: &ClassicalFormula) -> BcFormula {
    BcFormula::implies(
        acc_of(b),
        BcFormula::iff(
            update(b, BcFormula::boxed(body.clone())),
            BcFormula::boxed(ClassicalFormula::implies(b.formula().clone(), body.clone())),
        ),
    )
}

/// `not Acc(i,A) -> ([i,A]box B <-> box B)`
pub fn a5_2(b: &Block, body: &ClassicalFormula) -> BcFormula {
    BcFormula::implies(
        BcFormula::not(acc_of(b)),
        BcFormula::iff(update(b, BcFormula::boxed(body.clone())), BcFormula::boxed(body.clone())),
    )
}

/// `p[i,A][j,B]F <-> p[j,B][i,A]F`; `None` when `i = j`.
///
/// Two adjacent blocks with different indices may be received in either
/// order. Each block keeps its own formula.
pub fn a6(prefix: &[Block], first: &Block, second: &Block, f: &BcFormula) -> Option<BcFormula> {
    if first.index() == second.index() {
        return None;
    }
    let wrap = |x: &Block, y: &Block| {
        BcFormula::under_prefix(prefix, update(x, update(y, f.clone())))
    };
    Some(BcFormula::iff(wrap(first, second), wrap(second, first)))
}

/// Replaces every maximal subformula that is not `bot` or an implication by
/// an atom, identical subformulas by the same atom.
pub fn propositional_skeleton(f: &BcFormula) -> ClassicalFormula {
    fn go(f: &BcFormula, table: &mut HashMap<BcFormula, u64>) -> ClassicalFormula {
        match f {
            BcFormula::Falsum => ClassicalFormula::Falsum,
            BcFormula::Implies(a, b) => ClassicalFormula::implies(go(a, table), go(b, table)),
            other => {
                let next = table.len() as u64;
                let id = *table.entry(other.clone()).or_insert(next);
                ClassicalFormula::atom(id)
            }
        }
    }
    go(f, &mut HashMap::new())
}

fn strip_common_prefix<'a>(lhs: &'a BcFormula, rhs: &'a BcFormula) -> (Vec<Block>, &'a BcFormula, &'a BcFormula) {
    let mut prefix = Vec::new();
    let (mut l, mut r) = (lhs, rhs);
    while let (BcFormula::Update(bl, il), BcFormula::Update(br, ir)) = (l, r) {
        if bl != br {
            break;
        }
        prefix.push(bl.clone());
        l = il;
        r = ir;
    }
    (prefix, l, r)
}

fn match_a4(f: &BcFormula) -> bool {
    let Some((lhs, rhs)) = f.as_iff() else { return false };
    let Some((rf, rg)) = rhs.as_implies() else { return false };
    let (prefix, inner) = lhs.split_prefix();
    let prefix: Vec<Block> = prefix.into_iter().cloned().collect();
    // the prefix of the left side may be longer than the instance's prefix
    // when F -> G itself starts with updates; it cannot, since it is an
    // implication, so the split is exact
    let Some((inner_f, inner_g)) = inner.as_implies() else { return false };
    *rf == BcFormula::under_prefix(&prefix, inner_f.clone())
        && *rg == BcFormula::under_prefix(&prefix, inner_g.clone())
}

fn match_a6(f: &BcFormula) -> bool {
    let Some((lhs, rhs)) = f.as_iff() else { return false };
    let (prefix, l, r) = strip_common_prefix(lhs, rhs);
    let (BcFormula::Update(b1, l_rest), BcFormula::Update(b2, r_rest)) = (l, r) else {
        return false;
    };
    let (BcFormula::Update(b2_again, l_inner), BcFormula::Update(b1_again, r_inner)) =
        (&**l_rest, &**r_rest)
    else {
        return false;
    };
    b1.index() != b2.index() && b1_again == b1 && b2_again == b2 && l_inner == r_inner && {
        let _ = prefix;
        true
    }
}

/// `Acc(b)` for a block `b` whose acceptance condition `acc` is.
fn acc_block_matches(acc: &BcFormula, b: &Block) -> bool {
    *acc == acc_of(b)
}

/// Whether `f` is an instance of the named schema.
pub fn check_axiom(name: AxiomName, f: &BcFormula) -> bool {
    match name {
        AxiomName::PT => is_tautology(&propositional_skeleton(f)),
        AxiomName::K => {
            let Some((lhs, rhs)) = f.as_implies() else { return false };
            let BcFormula::Box(ClassicalFormula::Implies(a, b)) = lhs else { return false };
            let Some((BcFormula::Box(a2), BcFormula::Box(b2))) = rhs.as_implies() else {
                return false;
            };
            **a == *a2 && **b == *b2
        }
        AxiomName::D => *f == d(),
        AxiomName::Q => matches!(
            f.as_implies(),
            Some((BcFormula::Q(i), BcFormula::Q(j))) if i.index() > j.index()
        ),
        AxiomName::A1 => matches!(
            f.as_implies(),
            Some((BcFormula::Update(_, inner), BcFormula::Falsum)) if **inner == BcFormula::Falsum
        ),
        AxiomName::A2 => matches!(
            f.as_iff(),
            Some((BcFormula::Update(_, inner), BcFormula::P(p))) if **inner == BcFormula::P(*p)
        ),
        AxiomName::A3_1 => {
            let Some((acc, rest)) = f.as_implies() else { return false };
            let Some((BcFormula::Update(b, inner), top)) = rest.as_iff() else { return false };
            top.is_top() && **inner == q_of(b) && acc_block_matches(acc, b)
        }
        AxiomName::A3_2 => {
            let Some((not_acc, rest)) = f.as_implies() else { return false };
            let Some(acc) = not_acc.as_not() else { return false };
            let Some((BcFormula::Update(b, inner), qi)) = rest.as_iff() else { return false };
            **inner == q_of(b) && *qi == q_of(b) && acc_block_matches(acc, b)
        }
        AxiomName::A3_3 => matches!(
            f.as_iff(),
            Some((BcFormula::Update(b, inner), BcFormula::Q(j)))
                if **inner == BcFormula::Q(*j) && b.index() != j.index()
        ),
        AxiomName::A4 => match_a4(f),
        AxiomName::A5_1 => {
            let Some((acc, rest)) = f.as_implies() else { return false };
            let Some((BcFormula::Update(b, inner), BcFormula::Box(rhs_body))) = rest.as_iff() else {
                return false;
            };
            let BcFormula::Box(body) = &**inner else { return false };
            *rhs_body == ClassicalFormula::implies(b.formula().clone(), body.clone())
                && acc_block_matches(acc, b)
        }
        AxiomName::A5_2 => {
            let Some((not_acc, rest)) = f.as_implies() else { return false };
            let Some(acc) = not_acc.as_not() else { return false };
            let Some((BcFormula::Update(b, inner), BcFormula::Box(rhs_body))) = rest.as_iff() else {
                return false;
            };
            **inner == BcFormula::Box(rhs_body.clone()) && acc_block_matches(acc, b)
        }
        AxiomName::A6 => match_a6(f),
    }
}
