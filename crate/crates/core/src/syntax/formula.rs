use std::fmt;
use std::sync::Arc;

use super::SyntaxError;

/// A classical atom `Pn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u64);

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// A length atom `Qi`, true when the chain holds at least `i` formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LengthAtom(u64);

impl LengthAtom {
    /// Returns `None` for index 0; there is no `Q0`.
    pub fn new(index: u64) -> Option<Self> {
        (index >= 1).then_some(LengthAtom(index))
    }

    pub fn index(self) -> u64 {
        self.0
    }
}

impl fmt::Display for LengthAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}", self.0)
    }
}

/// Formulas of classical propositional logic over `bot`, `Pn` and `->`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassicalFormula {
    Falsum,
    Atom(Atom),
    Implies(Arc<ClassicalFormula>, Arc<ClassicalFormula>),
}

impl ClassicalFormula {
    pub fn atom(index: u64) -> Self {
        ClassicalFormula::Atom(Atom(index))
    }

    pub fn implies(lhs: ClassicalFormula, rhs: ClassicalFormula) -> Self {
        ClassicalFormula::Implies(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn not(inner: ClassicalFormula) -> Self {
        Self::implies(inner, ClassicalFormula::Falsum)
    }

    pub fn top() -> Self {
        Self::not(ClassicalFormula::Falsum)
    }

    pub fn and(lhs: ClassicalFormula, rhs: ClassicalFormula) -> Self {
        Self::not(Self::implies(lhs, Self::not(rhs)))
    }

    pub fn or(lhs: ClassicalFormula, rhs: ClassicalFormula) -> Self {
        Self::implies(Self::not(lhs), rhs)
    }

    pub fn iff(lhs: ClassicalFormula, rhs: ClassicalFormula) -> Self {
        Self::and(
            Self::implies(lhs.clone(), rhs.clone()),
            Self::implies(rhs, lhs),
        )
    }

    /// Appends every atom of the formula to `out` (with repetitions).
    pub fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            ClassicalFormula::Falsum => {}
            ClassicalFormula::Atom(p) => out.push(*p),
            ClassicalFormula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn to_bc(&self) -> BcFormula {
        match self {
            ClassicalFormula::Falsum => BcFormula::Falsum,
            ClassicalFormula::Atom(p) => BcFormula::P(*p),
            ClassicalFormula::Implies(a, b) => BcFormula::implies(a.to_bc(), b.to_bc()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            ClassicalFormula::Falsum | ClassicalFormula::Atom(_) => 1,
            ClassicalFormula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// A block `[i, A]`: a positive index and the classical formula it carries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    index: u64,
    formula: ClassicalFormula,
}

impl Block {
    pub fn new(index: u64, formula: ClassicalFormula) -> Result<Self, SyntaxError> {
        if index == 0 {
            return Err(SyntaxError::ZeroIndex);
        }
        Ok(Block { index, formula })
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn formula(&self) -> &ClassicalFormula {
        &self.formula
    }

    /// Same formula, different index.
    pub fn with_index(&self, index: u64) -> Result<Self, SyntaxError> {
        Block::new(index, self.formula.clone())
    }
}

/// Formulas of the blockchain language: classical atoms, length atoms,
/// implication, belief over classical formulas and block updates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BcFormula {
    Falsum,
    P(Atom),
    Q(LengthAtom),
    Implies(Arc<BcFormula>, Arc<BcFormula>),
    Box(ClassicalFormula),
    Update(Block, Arc<BcFormula>),
}

/// The smallest language a formula belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fragment {
    /// No length atoms, no boxes, no updates.
    Classical,
    /// Update-free.
    Modal,
    Full,
}

impl BcFormula {
    pub fn p(index: u64) -> Self {
        BcFormula::P(Atom(index))
    }

    /// Panics on index 0.
    pub fn q(index: u64) -> Self {
        BcFormula::Q(LengthAtom::new(index).expect("length atoms start at Q1"))
    }

    pub fn implies(lhs: BcFormula, rhs: BcFormula) -> Self {
        BcFormula::Implies(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn boxed(body: ClassicalFormula) -> Self {
        BcFormula::Box(body)
    }

    pub fn update(block: Block, inner: BcFormula) -> Self {
        BcFormula::Update(block, Arc::new(inner))
    }

    /// Wraps `inner` in the given updates, outermost first.
    pub fn under_prefix<'a>(prefix: impl IntoIterator<Item = &'a Block, IntoIter: DoubleEndedIterator>, inner: BcFormula) -> Self {
        prefix
            .into_iter()
            .rev()
            .fold(inner, |acc, b| BcFormula::update(b.clone(), acc))
    }

    pub fn not(inner: BcFormula) -> Self {
        Self::implies(inner, BcFormula::Falsum)
    }

    pub fn top() -> Self {
        Self::not(BcFormula::Falsum)
    }

    pub fn and(lhs: BcFormula, rhs: BcFormula) -> Self {
        Self::not(Self::implies(lhs, Self::not(rhs)))
    }

    pub fn or(lhs: BcFormula, rhs: BcFormula) -> Self {
        Self::implies(Self::not(lhs), rhs)
    }

    pub fn iff(lhs: BcFormula, rhs: BcFormula) -> Self {
        Self::and(
            Self::implies(lhs.clone(), rhs.clone()),
            Self::implies(rhs, lhs),
        )
    }

    /// Right-nested conjunction; `top` when empty.
    pub fn and_all(parts: impl IntoIterator<Item = BcFormula, IntoIter: DoubleEndedIterator>) -> Self {
        let mut it = parts.into_iter().rev();
        match it.next() {
            None => Self::top(),
            Some(last) => it.fold(last, |acc, f| Self::and(f, acc)),
        }
    }

    pub fn as_not(&self) -> Option<&BcFormula> {
        match self {
            BcFormula::Implies(a, b) if **b == BcFormula::Falsum => Some(a),
            _ => None,
        }
    }

    pub fn as_implies(&self) -> Option<(&BcFormula, &BcFormula)> {
        match self {
            BcFormula::Implies(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Matches the expansion produced by [`BcFormula::and`].
    pub fn as_and(&self) -> Option<(&BcFormula, &BcFormula)> {
        let (lhs, not_rhs) = self.as_not()?.as_implies()?;
        Some((lhs, not_rhs.as_not()?))
    }

    /// Matches the expansion produced by [`BcFormula::or`].
    pub fn as_or(&self) -> Option<(&BcFormula, &BcFormula)> {
        let (not_lhs, rhs) = self.as_implies()?;
        Some((not_lhs.as_not()?, rhs))
    }

    /// Matches the expansion produced by [`BcFormula::iff`].
    pub fn as_iff(&self) -> Option<(&BcFormula, &BcFormula)> {
        let (fwd, bwd) = self.as_and()?;
        let (a, b) = fwd.as_implies()?;
        let (b2, a2) = bwd.as_implies()?;
        (a == a2 && b == b2).then_some((a, b))
    }

    pub fn is_top(&self) -> bool {
        matches!(self.as_not(), Some(BcFormula::Falsum))
    }

    /// Splits off the maximal update prefix: `[i1,A1]...[ik,Ak]G` gives
    /// the blocks and `G`.
    pub fn split_prefix(&self) -> (Vec<&Block>, &BcFormula) {
        let mut blocks = Vec::new();
        let mut cur = self;
        while let BcFormula::Update(b, inner) = cur {
            blocks.push(b);
            cur = inner;
        }
        (blocks, cur)
    }

    /// The classical formula this is, if it mentions only `bot`, `Pn` and `->`.
    pub fn to_classical(&self) -> Option<ClassicalFormula> {
        match self {
            BcFormula::Falsum => Some(ClassicalFormula::Falsum),
            BcFormula::P(p) => Some(ClassicalFormula::Atom(*p)),
            BcFormula::Implies(a, b) => Some(ClassicalFormula::implies(
                a.to_classical()?,
                b.to_classical()?,
            )),
            BcFormula::Q(_) | BcFormula::Box(_) | BcFormula::Update(..) => None,
        }
    }

    pub fn fragment(&self) -> Fragment {
        match self {
            BcFormula::Falsum | BcFormula::P(_) => Fragment::Classical,
            BcFormula::Q(_) | BcFormula::Box(_) => Fragment::Modal,
            BcFormula::Implies(a, b) => a.fragment().max(b.fragment()),
            BcFormula::Update(..) => Fragment::Full,
        }
    }

    pub fn is_update_free(&self) -> bool {
        self.fragment() != Fragment::Full
    }

    /// No update operator occurs inside the scope of an update with a
    /// larger index; along every path from the root the update indices
    /// never decrease.
    pub fn is_compliant(&self) -> bool {
        fn go(f: &BcFormula, floor: u64) -> bool {
            match f {
                BcFormula::Falsum | BcFormula::P(_) | BcFormula::Q(_) | BcFormula::Box(_) => true,
                BcFormula::Implies(a, b) => go(a, floor) && go(b, floor),
                BcFormula::Update(blk, inner) => blk.index() >= floor && go(inner, blk.index()),
            }
        }
        go(self, 0)
    }

    pub fn size(&self) -> usize {
        match self {
            BcFormula::Falsum | BcFormula::P(_) | BcFormula::Q(_) => 1,
            BcFormula::Box(a) => 1 + a.size(),
            BcFormula::Implies(a, b) => 1 + a.size() + b.size(),
            BcFormula::Update(blk, inner) => 1 + blk.formula().size() + inner.size(),
        }
    }

    /// Calls `visit` on every subformula, parents before children.
    pub fn for_each_subformula<'a>(&'a self, visit: &mut impl FnMut(&'a BcFormula)) {
        visit(self);
        match self {
            BcFormula::Implies(a, b) => {
                a.for_each_subformula(visit);
                b.for_each_subformula(visit);
            }
            BcFormula::Update(_, inner) => inner.for_each_subformula(visit),
            _ => {}
        }
    }

    /// Classical atoms occurring anywhere, including box bodies and blocks.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.for_each_subformula(&mut |f| match f {
            BcFormula::P(p) => out.push(*p),
            BcFormula::Box(a) => a.collect_atoms(&mut out),
            BcFormula::Update(b, _) => b.formula().collect_atoms(&mut out),
            _ => {}
        });
        out.sort();
        out.dedup();
        out
    }

    /// Classical atoms occurring as top-level `Pn` leaves, i.e. the atoms
    /// whose truth is read off the valuation.
    pub fn world_atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.for_each_subformula(&mut |f| {
            if let BcFormula::P(p) = f {
                out.push(*p)
            }
        });
        out.sort();
        out.dedup();
        out
    }

    pub fn length_atoms(&self) -> Vec<LengthAtom> {
        let mut out = Vec::new();
        self.for_each_subformula(&mut |f| {
            if let BcFormula::Q(q) = f {
                out.push(*q)
            }
        });
        out.sort();
        out.dedup();
        out
    }

    pub fn box_bodies(&self) -> Vec<&ClassicalFormula> {
        let mut out = Vec::new();
        self.for_each_subformula(&mut |f| {
            if let BcFormula::Box(a) = f {
                out.push(a)
            }
        });
        out.sort();
        out.dedup();
        out
    }

    pub fn blocks(&self) -> Vec<&Block> {
        let mut out = Vec::new();
        self.for_each_subformula(&mut |f| {
            if let BcFormula::Update(b, _) = f {
                out.push(b)
            }
        });
        out.sort();
        out.dedup();
        out
    }

    /// The largest block or length-atom index mentioned, 0 if none.
    pub fn max_index(&self) -> u64 {
        let mut max = 0;
        self.for_each_subformula(&mut |f| match f {
            BcFormula::Q(q) => max = max.max(q.index()),
            BcFormula::Update(b, _) => max = max.max(b.index()),
            _ => {}
        });
        max
    }
}

impl From<ClassicalFormula> for BcFormula {
    fn from(a: ClassicalFormula) -> Self {
        a.to_bc()
    }
}

/// The acceptance condition `Acc(i, A)`: the chain has length `i - 1` and
/// `A` is consistent with what is currently believed.
pub fn acc_formula(index: u64, formula: &ClassicalFormula) -> Result<BcFormula, SyntaxError> {
    if index == 0 {
        return Err(SyntaxError::ZeroIndex);
    }
    let not_qi = BcFormula::not(BcFormula::q(index));
    let consistent = BcFormula::not(BcFormula::boxed(ClassicalFormula::not(formula.clone())));
    Ok(if index == 1 {
        BcFormula::and(not_qi, consistent)
    } else {
        BcFormula::and_all([BcFormula::q(index - 1), not_qi, consistent])
    })
}

/// [`acc_formula`] for an already validated block.
pub fn acc_of(block: &Block) -> BcFormula {
    acc_formula(block.index(), block.formula()).expect("block indices are positive")
}
