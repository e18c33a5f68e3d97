use std::fmt;
use std::sync::Arc;

use super::formula::{Atom, BcFormula, Block, ClassicalFormula, LengthAtom};
use super::SyntaxError;

/// A formula with holes, written with the placeholder `X`. Filling every
/// hole with the same formula yields `H(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Context {
    Hole,
    Falsum,
    P(Atom),
    Q(LengthAtom),
    Implies(Box<Context>, Box<Context>),
    /// The body is a classical context.
    Box(Box<Context>),
    /// A block whose formula is a classical context.
    Update(u64, Box<Context>, Box<Context>),
}

impl Context {
    pub fn hole_count(&self) -> usize {
        match self {
            Context::Hole => 1,
            Context::Falsum | Context::P(_) | Context::Q(_) => 0,
            Context::Implies(a, b) => a.hole_count() + b.hole_count(),
            Context::Box(a) => a.hole_count(),
            Context::Update(_, a, b) => a.hole_count() + b.hole_count(),
        }
    }

    /// Replaces every hole with `filler`. Holes inside box bodies or block
    /// formulas require a classical filler.
    pub fn fill(&self, filler: &BcFormula) -> Result<BcFormula, SyntaxError> {
        Ok(match self {
            Context::Hole => filler.clone(),
            Context::Falsum => BcFormula::Falsum,
            Context::P(p) => BcFormula::P(*p),
            Context::Q(q) => BcFormula::Q(*q),
            Context::Implies(a, b) => {
                BcFormula::Implies(Arc::new(a.fill(filler)?), Arc::new(b.fill(filler)?))
            }
            Context::Box(body) => BcFormula::Box(body.fill_classical(filler)?),
            Context::Update(i, body, inner) => BcFormula::Update(
                Block::new(*i, body.fill_classical(filler)?)?,
                Arc::new(inner.fill(filler)?),
            ),
        })
    }

    fn fill_classical(&self, filler: &BcFormula) -> Result<ClassicalFormula, SyntaxError> {
        Ok(match self {
            Context::Hole => filler
                .to_classical()
                .ok_or(SyntaxError::NotClassical { pos: 0, what: "filler under box or block" })?,
            Context::Falsum => ClassicalFormula::Falsum,
            Context::P(p) => ClassicalFormula::Atom(*p),
            Context::Implies(a, b) => {
                ClassicalFormula::implies(a.fill_classical(filler)?, b.fill_classical(filler)?)
            }
            Context::Q(_) | Context::Box(_) | Context::Update(..) => {
                return Err(SyntaxError::NotClassical { pos: 0, what: "box body" })
            }
        })
    }
}

impl Context {
    fn write(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            Context::Hole => f.write_str("X"),
            Context::Falsum => f.write_str("bot"),
            Context::P(p) => write!(f, "{p}"),
            Context::Q(q) => write!(f, "{q}"),
            Context::Implies(a, b) => {
                if nested {
                    f.write_str("(")?;
                }
                a.write(f, true)?;
                f.write_str(" -> ")?;
                b.write(f, false)?;
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Context::Box(body) => {
                f.write_str("box ")?;
                body.write(f, true)
            }
            Context::Update(i, body, inner) => {
                write!(f, "[{i}, ")?;
                body.write(f, false)?;
                f.write_str("]")?;
                inner.write(f, true)
            }
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, false)
    }
}
