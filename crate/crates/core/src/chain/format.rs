//! The plain-text model format.
//!
//! ```text
//! I:
//! P0 -> P1
//! BC:
//! P0
//! PU:
//! 3 top
//! V: P0 P1
//! ```
//!
//! `I:` and `BC:` take one classical formula per line, `PU:` takes lines
//! `index formula`, and `V:` lists the true atoms. Blank lines and lines
//! starting with `#` are ignored. Sections may be omitted.

use super::{complete, ChainError, Completion, Model};
use crate::propositional::{TheorySet, Valuation};
use crate::syntax::{parse_block, parse_classical, Atom, Block, ClassicalFormula, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelTextError {
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: SyntaxError },
    #[error("line {line}: content before any section header")]
    NoSection { line: usize },
    #[error("line {line}: `{word}` is not a classical atom")]
    BadAtom { line: usize, word: String },
    #[error("line {line}: section `{name}` appears twice")]
    DuplicateSection { line: usize, name: String },
}

/// The four components of a model as written, before the model conditions
/// are checked. Pending blocks may violate condition (2) here; running
/// [`ModelSpec::complete`] repairs that.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelSpec {
    pub background: TheorySet,
    pub chain: Vec<ClassicalFormula>,
    pub pending: Vec<Block>,
    pub valuation: Valuation,
}

impl ModelSpec {
    pub fn into_model(self) -> Result<Model, ChainError> {
        Model::new(self.background, self.chain, self.pending, self.valuation)
    }

    pub fn complete(&self) -> Result<Completion, ChainError> {
        complete(&self.background, &self.chain, &self.pending)
    }

    /// The model obtained by completing the written chain and pending list.
    pub fn into_completed_model(self) -> Result<(Model, Completion), ChainError> {
        let done = self.complete()?;
        let model = Model::new(self.background, done.chain.clone(), done.pending.clone(), self.valuation)?;
        Ok((model, done))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Background,
    Chain,
    Pending,
    Valuation,
}

fn parse_atoms(text: &str, line: usize, out: &mut Valuation) -> Result<(), ModelTextError> {
    for word in text.split_whitespace() {
        let index = word
            .strip_prefix('P')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<u64>().ok())
            .ok_or_else(|| ModelTextError::BadAtom { line, word: word.to_string() })?;
        out.insert(Atom(index));
    }
    Ok(())
}

pub fn parse_model_text(text: &str) -> Result<ModelSpec, ModelTextError> {
    let mut spec = ModelSpec::default();
    let mut section = None;
    let mut seen: Vec<&str> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut body = trimmed;
        for (name, sec) in [
            ("I:", Section::Background),
            ("BC:", Section::Chain),
            ("PU:", Section::Pending),
            ("V:", Section::Valuation),
        ] {
            if let Some(rest) = trimmed.strip_prefix(name) {
                if seen.contains(&name) {
                    return Err(ModelTextError::DuplicateSection { line, name: name.to_string() });
                }
                seen.push(name);
                section = Some(sec);
                body = rest.trim();
                break;
            }
        }
        if body.is_empty() {
            continue;
        }
        let syntax = |source| ModelTextError::Syntax { line, source };
        match section {
            None => return Err(ModelTextError::NoSection { line }),
            Some(Section::Background) => {
                spec.background.insert(parse_classical(body).map_err(syntax)?);
            }
            Some(Section::Chain) => spec.chain.push(parse_classical(body).map_err(syntax)?),
            Some(Section::Pending) => spec.pending.push(parse_block(body).map_err(syntax)?),
            Some(Section::Valuation) => parse_atoms(body, line, &mut spec.valuation)?,
        }
    }
    Ok(spec)
}
