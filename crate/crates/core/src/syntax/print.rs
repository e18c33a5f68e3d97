use std::fmt::{self, Write};

use super::formula::{BcFormula, Block, ClassicalFormula};

/// Controls how formulas are rendered.
///
/// The default re-sugars `not`, `top`, `&`, `|` and `<->` and emits only the
/// parentheses the grammar needs. Every setting produces text that parses
/// back to the same tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Printer {
    pub sugar: bool,
    pub full_parens: bool,
}

impl Default for Printer {
    fn default() -> Self {
        Printer { sugar: true, full_parens: false }
    }
}

const IFF: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

enum Shape<'a> {
    Atomic(String),
    Prefix(String, &'a BcFormula),
    BoxOf(&'a ClassicalFormula),
    Binary(u8, &'static str, &'a BcFormula, &'a BcFormula),
}

impl Printer {
    pub fn raw() -> Self {
        Printer { sugar: false, full_parens: false }
    }

    pub fn full() -> Self {
        Printer { sugar: true, full_parens: true }
    }

    pub fn formula(&self, f: &BcFormula) -> String {
        let mut out = String::new();
        self.write(&mut out, f, IFF).expect("writing to a String cannot fail");
        out
    }

    pub fn classical(&self, a: &ClassicalFormula) -> String {
        self.formula(&a.to_bc())
    }

    pub fn block(&self, b: &Block) -> String {
        format!("[{}, {}]", b.index(), self.classical(b.formula()))
    }

    fn shape<'a>(&self, f: &'a BcFormula) -> Shape<'a> {
        match f {
            BcFormula::Falsum => Shape::Atomic("bot".into()),
            BcFormula::P(p) => Shape::Atomic(p.to_string()),
            BcFormula::Q(q) => Shape::Atomic(q.to_string()),
            BcFormula::Box(a) => Shape::BoxOf(a),
            BcFormula::Update(b, inner) => Shape::Prefix(self.block(b), inner),
            BcFormula::Implies(a, b) => {
                if self.sugar {
                    if let Some((x, y)) = f.as_iff() {
                        return Shape::Binary(IFF, "<->", x, y);
                    }
                    if let Some((x, y)) = f.as_and() {
                        return Shape::Binary(AND, "&", x, y);
                    }
                    if f.is_top() {
                        return Shape::Atomic("top".into());
                    }
                    if let Some(x) = f.as_not() {
                        return Shape::Prefix("not ".into(), x);
                    }
                    if let Some((x, y)) = f.as_or() {
                        return Shape::Binary(OR, "|", x, y);
                    }
                }
                Shape::Binary(IMP, "->", a, b)
            }
        }
    }

    fn write(&self, out: &mut String, f: &BcFormula, min_level: u8) -> fmt::Result {
        match self.shape(f) {
            Shape::Atomic(s) => out.write_str(&s),
            Shape::Prefix(head, inner) => {
                out.write_str(&head)?;
                self.write(out, inner, UNARY)
            }
            Shape::BoxOf(body) => {
                out.write_str("box ")?;
                self.write(out, &body.to_bc(), UNARY)
            }
            Shape::Binary(level, op, lhs, rhs) => {
                let wrap = level < min_level || (self.full_parens && min_level > IFF);
                if wrap {
                    out.write_char('(')?;
                }
                // right-associative: the left operand must bind strictly tighter
                self.write(out, lhs, if self.full_parens { UNARY } else { level + 1 })?;
                write!(out, " {op} ")?;
                self.write(out, rhs, if self.full_parens { UNARY } else { level })?;
                if wrap {
                    out.write_char(')')?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for BcFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::default().formula(self))
    }
}

impl fmt::Display for ClassicalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::default().classical(self))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::default().block(self))
    }
}
