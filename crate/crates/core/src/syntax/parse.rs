//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! ```text
//! formula := iff
//! iff     := impl ("<->" iff)?
//! impl    := or ("->" impl)?
//! or      := and ("|" or)?
//! and     := unary ("&" and)?
//! unary   := "bot" | "top" | atom | "not" unary | "box" unary
//!          | "[" nat "," formula "]" unary | "(" formula ")"
//! atom    := "P" nat | "Q" posnat
//! ```
//!
//! All binary connectives associate to the right. Box bodies and block
//! formulas must be classical; this is checked after parsing so the error
//! can point at the offending operator.

use std::sync::Arc;

use super::context::Context;
use super::formula::{Atom, BcFormula, Block, ClassicalFormula, LengthAtom};
use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Bot,
    Top,
    Not,
    BoxKw,
    P(u64),
    Q(u64),
    Hole,
    Nat(u64),
    Arrow,
    Iff,
    And,
    Or,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Bot => "`bot`".into(),
            Token::Top => "`top`".into(),
            Token::Not => "`not`".into(),
            Token::BoxKw => "`box`".into(),
            Token::P(n) => format!("`P{n}`"),
            Token::Q(n) => format!("`Q{n}`"),
            Token::Hole => "`X`".into(),
            Token::Nat(n) => format!("`{n}`"),
            Token::Arrow => "`->`".into(),
            Token::Iff => "`<->`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::LBracket => "`[`".into(),
            Token::RBracket => "`]`".into(),
            Token::Comma => "`,`".into(),
        }
    }
}

fn parse_index(digits: &str, pos: usize) -> Result<u64, SyntaxError> {
    digits
        .parse::<u64>()
        .map_err(|_| SyntaxError::IndexOverflow { pos })
}

fn lex(text: &str, allow_hole: bool) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            b'[' => Some(Token::LBracket),
            b']' => Some(Token::RBracket),
            b',' => Some(Token::Comma),
            b'&' => Some(Token::And),
            b'|' => Some(Token::Or),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((start, tok));
            i += 1;
            continue;
        }
        if text[i..].starts_with("->") {
            out.push((start, Token::Arrow));
            i += 2;
            continue;
        }
        if text[i..].starts_with("<->") {
            out.push((start, Token::Iff));
            i += 3;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Token::Nat(parse_index(&text[start..i], start)?)));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "bot" => Token::Bot,
                "top" => Token::Top,
                "not" => Token::Not,
                "box" => Token::BoxKw,
                "X" if allow_hole => Token::Hole,
                _ => {
                    let (head, digits) = word.split_at(1);
                    if digits.is_empty() || !digits.bytes().all(|d| d.is_ascii_digit()) {
                        return Err(SyntaxError::UnknownWord { pos: start, word: word.to_string() });
                    }
                    match head {
                        "P" => Token::P(parse_index(digits, start)?),
                        "Q" => Token::Q(parse_index(digits, start)?),
                        _ => {
                            return Err(SyntaxError::UnknownWord { pos: start, word: word.to_string() })
                        }
                    }
                }
            };
            out.push((start, tok));
            continue;
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(SyntaxError::BadCharacter { pos: start, ch });
    }
    Ok(out)
}

/// Untyped syntax tree; sugar is already expanded.
#[derive(Clone, Debug)]
enum Expr {
    Bot,
    P(Atom),
    Q(LengthAtom),
    Hole,
    Imp(Box<Expr>, Box<Expr>),
    Box(Box<Expr>, usize),
    Update(u64, Box<Expr>, Box<Expr>, usize),
}

impl Expr {
    fn imp(a: Expr, b: Expr) -> Expr {
        Expr::Imp(Box::new(a), Box::new(b))
    }

    fn not(a: Expr) -> Expr {
        Expr::imp(a, Expr::Bot)
    }

    fn and(a: Expr, b: Expr) -> Expr {
        Expr::not(Expr::imp(a, Expr::not(b)))
    }

    fn or(a: Expr, b: Expr) -> Expr {
        Expr::imp(Expr::not(a), b)
    }

    fn iff(a: Expr, b: Expr) -> Expr {
        Expr::and(Expr::imp(a.clone(), b.clone()), Expr::imp(b, a))
    }
}

struct Parser<'t> {
    tokens: &'t [(usize, Token)],
    at: usize,
    end: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn fail(&self, expected: &'static str) -> SyntaxError {
        match self.peek() {
            Some(t) => SyntaxError::Unexpected {
                pos: self.pos(),
                found: t.describe(),
                expected,
            },
            None => SyntaxError::UnexpectedEnd { pos: self.end, expected },
        }
    }

    fn expect(&mut self, tok: Token, expected: &'static str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.fail(expected))
        }
    }

    fn formula(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.implication()?;
        if self.peek() == Some(&Token::Iff) {
            self.at += 1;
            let rhs = self.formula()?;
            return Ok(Expr::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Arrow) {
            self.at += 1;
            let rhs = self.implication()?;
            return Ok(Expr::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.conjunction()?;
        if self.peek() == Some(&Token::Or) {
            self.at += 1;
            let rhs = self.disjunction()?;
            return Ok(Expr::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Token::And) {
            self.at += 1;
            let rhs = self.conjunction()?;
            return Ok(Expr::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        let Some(tok) = self.bump() else {
            return Err(SyntaxError::UnexpectedEnd { pos: self.end, expected: "a formula" });
        };
        match tok {
            Token::Bot => Ok(Expr::Bot),
            Token::Top => Ok(Expr::not(Expr::Bot)),
            Token::P(n) => Ok(Expr::P(Atom(n))),
            Token::Q(n) => LengthAtom::new(n)
                .map(Expr::Q)
                .ok_or(SyntaxError::ZeroLengthAtom { pos }),
            Token::Hole => Ok(Expr::Hole),
            Token::Not => Ok(Expr::not(self.unary()?)),
            Token::BoxKw => Ok(Expr::Box(Box::new(self.unary()?), pos)),
            Token::LParen => {
                let inner = self.formula()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::LBracket => {
                let index = match self.bump() {
                    Some(Token::Nat(n)) => n,
                    _ => {
                        self.at -= 1;
                        return Err(self.fail("a block index"));
                    }
                };
                if index == 0 {
                    return Err(SyntaxError::ZeroBlockIndex { pos });
                }
                self.expect(Token::Comma, "`,`")?;
                let body = self.formula()?;
                self.expect(Token::RBracket, "`]`")?;
                let inner = self.unary()?;
                Ok(Expr::Update(index, Box::new(body), Box::new(inner), pos))
            }
            _ => {
                self.at -= 1;
                Err(self.fail("a formula"))
            }
        }
    }
}

fn parse_expr(text: &str, allow_hole: bool) -> Result<Expr, SyntaxError> {
    let tokens = lex(text, allow_hole)?;
    let mut parser = Parser { tokens: &tokens, at: 0, end: text.len() };
    let expr = parser.formula()?;
    if parser.at < tokens.len() {
        return Err(parser.fail("end of input"));
    }
    Ok(expr)
}

fn classical(e: &Expr, pos: usize, what: &'static str) -> Result<ClassicalFormula, SyntaxError> {
    match e {
        Expr::Bot => Ok(ClassicalFormula::Falsum),
        Expr::P(p) => Ok(ClassicalFormula::Atom(*p)),
        Expr::Imp(a, b) => Ok(ClassicalFormula::implies(
            classical(a, pos, what)?,
            classical(b, pos, what)?,
        )),
        Expr::Q(_) | Expr::Box(..) | Expr::Update(..) | Expr::Hole => {
            Err(SyntaxError::NotClassical { pos, what })
        }
    }
}

fn bc(e: &Expr) -> Result<BcFormula, SyntaxError> {
    Ok(match e {
        Expr::Bot => BcFormula::Falsum,
        Expr::P(p) => BcFormula::P(*p),
        Expr::Q(q) => BcFormula::Q(*q),
        Expr::Hole => unreachable!("holes are only lexed for contexts"),
        Expr::Imp(a, b) => BcFormula::Implies(Arc::new(bc(a)?), Arc::new(bc(b)?)),
        Expr::Box(body, pos) => BcFormula::Box(classical(body, *pos, "box body")?),
        Expr::Update(i, body, inner, pos) => BcFormula::Update(
            Block::new(*i, classical(body, *pos, "block formula")?)?,
            Arc::new(bc(inner)?),
        ),
    })
}

fn context(e: &Expr) -> Result<Context, SyntaxError> {
    fn classical_ctx(e: &Expr, pos: usize, what: &'static str) -> Result<Context, SyntaxError> {
        match e {
            Expr::Bot => Ok(Context::Falsum),
            Expr::P(p) => Ok(Context::P(*p)),
            Expr::Hole => Ok(Context::Hole),
            Expr::Imp(a, b) => Ok(Context::Implies(
                Box::new(classical_ctx(a, pos, what)?),
                Box::new(classical_ctx(b, pos, what)?),
            )),
            _ => Err(SyntaxError::NotClassical { pos, what }),
        }
    }
    Ok(match e {
        Expr::Bot => Context::Falsum,
        Expr::P(p) => Context::P(*p),
        Expr::Q(q) => Context::Q(*q),
        Expr::Hole => Context::Hole,
        Expr::Imp(a, b) => Context::Implies(Box::new(context(a)?), Box::new(context(b)?)),
        Expr::Box(body, pos) => Context::Box(Box::new(classical_ctx(body, *pos, "box body")?)),
        Expr::Update(i, body, inner, pos) => Context::Update(
            *i,
            Box::new(classical_ctx(body, *pos, "block formula")?),
            Box::new(context(inner)?),
        ),
    })
}

/// Parses a formula of the full blockchain language.
pub fn parse_formula(text: &str) -> Result<BcFormula, SyntaxError> {
    bc(&parse_expr(text, false)?)
}

/// Parses a classical formula (no length atoms, boxes or updates).
pub fn parse_classical(text: &str) -> Result<ClassicalFormula, SyntaxError> {
    classical(&parse_expr(text, false)?, 0, "classical formula")
}

/// Parses a block, written either `[i, A]` or `i A`.
pub fn parse_block(text: &str) -> Result<Block, SyntaxError> {
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix('[') {
        let Some(inner) = rest.strip_suffix(']') else {
            return Err(SyntaxError::UnexpectedEnd { pos: text.len(), expected: "`]`" });
        };
        let offset = text.len() - text.trim_start().len() + 1;
        return parse_index_and_formula(inner, offset, ',');
    }
    let offset = text.len() - text.trim_start().len();
    parse_index_and_formula(trimmed, offset, ' ')
}

fn parse_index_and_formula(text: &str, offset: usize, sep: char) -> Result<Block, SyntaxError> {
    let trimmed = text.trim_start();
    let lead = text.len() - trimmed.len();
    let digits_end = trimmed
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(trimmed.len());
    if digits_end == 0 {
        return Err(SyntaxError::Unexpected {
            pos: offset + lead,
            found: trimmed.chars().next().map_or("end of input".into(), |c| format!("`{c}`")),
            expected: "a block index",
        });
    }
    let index = parse_index(&trimmed[..digits_end], offset + lead)?;
    if index == 0 {
        return Err(SyntaxError::ZeroBlockIndex { pos: offset + lead });
    }
    let mut rest = &trimmed[digits_end..];
    let mut rest_offset = offset + lead + digits_end;
    if sep == ',' {
        let t = rest.trim_start();
        rest_offset += rest.len() - t.len();
        let Some(after) = t.strip_prefix(',') else {
            return Err(SyntaxError::Unexpected {
                pos: rest_offset,
                found: t.chars().next().map_or("end of input".into(), |c| format!("`{c}`")),
                expected: "`,`",
            });
        };
        rest = after;
        rest_offset += 1;
    }
    let formula = parse_classical(rest).map_err(|e| e.shifted(rest_offset))?;
    Block::new(index, formula)
}

/// Parses a substitution context: a formula in which the placeholder `X`
/// may occur any number of times.
pub fn parse_context(text: &str) -> Result<Context, SyntaxError> {
    context(&parse_expr(text, true)?)
}
