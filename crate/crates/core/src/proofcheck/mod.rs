//! Checking Hilbert-style derivations.
//!
//! A proof file has one step per line:
//!
//! ```text
//! 1. P0 -> P0 ; AX PT
//! 2. box (P0 -> P0) ; NEC 1
//! 3. [1, P0]Q2 <-> Q2 ; AX A3.3
//! 4. [2, P1][1, P0]Q2 <-> [2, P1]Q2 ; SUB 3 ; context [2, P1]X
//! ```
//!
//! Line numbers must count up from 1. Blank lines and `#` comments are
//! skipped.

mod axioms;

pub use axioms::{
    a1, a2, a3_1, a3_2, a3_3, a4, a5_1, a5_2, a6, check_axiom, d, k, propositional_skeleton, q, AxiomName,
    UnknownAxiom,
};

use std::fmt;

use crate::syntax::{parse_context, parse_formula, BcFormula, Context, Printer, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom(AxiomName),
    /// `MP(premise, implication)`: lines holding `F` and `F -> G`.
    MP(usize, usize),
    Nec(usize),
    Sub(usize, Context),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(name) => write!(f, "AX {name}"),
            Justification::MP(i, j) => write!(f, "MP {i} {j}"),
            Justification::Nec(i) => write!(f, "NEC {i}"),
            Justification::Sub(i, ctx) => write!(f, "SUB {i} ; context {ctx}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: BcFormula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    pub lines: Vec<ProofLine>,
}

impl Derivation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a line and returns its 1-based number.
    pub fn push(&mut self, formula: BcFormula, justification: Justification) -> usize {
        self.lines.push(ProofLine { formula, justification });
        self.lines.len()
    }

    pub fn conclusion(&self) -> Option<&BcFormula> {
        self.lines.last().map(|l| &l.formula)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let printer = Printer::default();
        for (n, line) in self.lines.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", n + 1, printer.formula(&line.formula), line.justification)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProofErrorKind {
    #[error("line {0} is not an earlier line")]
    BadReference(usize),
    #[error("not an instance of {0}")]
    NotAnAxiom(AxiomName),
    #[error("line {implication} is not `{premise_line} -> this line`")]
    MpMismatch { premise_line: usize, implication: usize },
    #[error("the premise of NEC must be classical")]
    NecPremiseNotClassical,
    #[error("NEC yields `box` of line {0}")]
    NecMismatch(usize),
    #[error("the premise of SUB must be a biconditional")]
    SubPremiseNotIff,
    #[error("context cannot be filled: {0}")]
    SubContext(SyntaxError),
    #[error("SUB yields `H(F) <-> H(G)` for the given context")]
    SubMismatch,
    #[error("SUB conclusion is not compliant")]
    SubNotCompliant,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ProofError {
    pub line: usize,
    pub kind: ProofErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProofParseError {
    #[error("line {line}: expected `n. formula ; justification`")]
    Shape { line: usize },
    #[error("line {line}: step is numbered {found}, expected {expected}")]
    Numbering { line: usize, found: String, expected: usize },
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: SyntaxError },
    #[error("line {line}: unknown justification `{text}`")]
    Justification { line: usize, text: String },
    #[error("line {line}: {source}")]
    Axiom { line: usize, source: UnknownAxiom },
}

fn premise(lines: &[ProofLine], current: usize, reference: usize) -> Result<&BcFormula, ProofErrorKind> {
    if reference == 0 || reference >= current {
        return Err(ProofErrorKind::BadReference(reference));
    }
    Ok(&lines[reference - 1].formula)
}

/// Checks line `number` (1-based) of `lines` against the lines before it.
pub fn check_rule(lines: &[ProofLine], number: usize) -> Result<(), ProofErrorKind> {
    let line = &lines[number - 1];
    let f = &line.formula;
    match &line.justification {
        Justification::Axiom(name) => {
            if check_axiom(*name, f) {
                Ok(())
            } else {
                Err(ProofErrorKind::NotAnAxiom(*name))
            }
        }
        Justification::MP(i, j) => {
            let antecedent = premise(lines, number, *i)?;
            let implication = premise(lines, number, *j)?;
            match implication.as_implies() {
                Some((a, b)) if a == antecedent && b == f => Ok(()),
                _ => Err(ProofErrorKind::MpMismatch { premise_line: *i, implication: *j }),
            }
        }
        Justification::Nec(i) => {
            let a = premise(lines, number, *i)?;
            let Some(a) = a.to_classical() else {
                return Err(ProofErrorKind::NecPremiseNotClassical);
            };
            if *f == BcFormula::boxed(a) {
                Ok(())
            } else {
                Err(ProofErrorKind::NecMismatch(*i))
            }
        }
        Justification::Sub(i, ctx) => {
            let p = premise(lines, number, *i)?;
            let (lhs, rhs) = p.as_iff().ok_or(ProofErrorKind::SubPremiseNotIff)?;
            let hl = ctx.fill(lhs).map_err(ProofErrorKind::SubContext)?;
            let hr = ctx.fill(rhs).map_err(ProofErrorKind::SubContext)?;
            let expected = BcFormula::iff(hl, hr);
            if *f != expected {
                return Err(ProofErrorKind::SubMismatch);
            }
            if !f.is_compliant() {
                return Err(ProofErrorKind::SubNotCompliant);
            }
            Ok(())
        }
    }
}

/// Checks every line; the first failing line is reported.
pub fn check_derivation(d: &Derivation) -> Result<(), ProofError> {
    for number in 1..=d.lines.len() {
        check_rule(&d.lines, number).map_err(|kind| ProofError { line: number, kind })?;
    }
    Ok(())
}

fn parse_justification(text: &str, line: usize) -> Result<Justification, ProofParseError> {
    let bad = || ProofParseError::Justification { line, text: text.to_string() };
    let mut words = text.split_whitespace();
    let number = |w: Option<&str>| w.and_then(|w| w.parse::<usize>().ok()).ok_or_else(bad);
    let j = match words.next() {
        Some("AX") => {
            let name = words.next().ok_or_else(bad)?;
            Justification::Axiom(name.parse().map_err(|source| ProofParseError::Axiom { line, source })?)
        }
        Some("MP") => Justification::MP(number(words.next())?, number(words.next())?),
        Some("NEC") => Justification::Nec(number(words.next())?),
        _ => return Err(bad()),
    };
    if words.next().is_some() {
        return Err(bad());
    }
    Ok(j)
}

pub fn parse_derivation(text: &str) -> Result<Derivation, ProofParseError> {
    let mut d = Derivation::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (label, rest) = trimmed.split_once('.').ok_or(ProofParseError::Shape { line })?;
        let expected = d.lines.len() + 1;
        if label.trim().parse::<usize>().ok() != Some(expected) {
            return Err(ProofParseError::Numbering { line, found: label.trim().to_string(), expected });
        }
        let mut parts = rest.splitn(3, ';');
        let (Some(formula), Some(just)) = (parts.next(), parts.next()) else {
            return Err(ProofParseError::Shape { line });
        };
        let formula = parse_formula(formula).map_err(|source| ProofParseError::Syntax { line, source })?;
        let justification = match parts.next() {
            None => parse_justification(just, line)?,
            Some(ctx_part) => {
                let mut words = just.split_whitespace();
                let premise = match (words.next(), words.next(), words.next()) {
                    (Some("SUB"), Some(i), None) => i.parse::<usize>().ok(),
                    _ => None,
                };
                let ctx_text = ctx_part.trim().strip_prefix("context");
                let (Some(premise), Some(ctx_text)) = (premise, ctx_text) else {
                    return Err(ProofParseError::Justification { line, text: rest.trim().to_string() });
                };
                let ctx = parse_context(ctx_text).map_err(|source| ProofParseError::Syntax { line, source })?;
                Justification::Sub(premise, ctx)
            }
        };
        d.push(formula, justification);
    }
    Ok(d)
}
