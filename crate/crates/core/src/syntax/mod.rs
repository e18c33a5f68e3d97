//! Abstract and concrete syntax of the blockchain language.

mod context;
mod formula;
mod parse;
mod print;

pub use context::Context;
pub use formula::{acc_formula, acc_of, Atom, BcFormula, Block, ClassicalFormula, Fragment, LengthAtom};
pub use parse::{parse_block, parse_classical, parse_context, parse_formula};
pub use print::Printer;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("unexpected {found} at byte {pos}, expected {expected}")]
    Unexpected { pos: usize, found: String, expected: &'static str },
    #[error("unexpected end of input at byte {pos}, expected {expected}")]
    UnexpectedEnd { pos: usize, expected: &'static str },
    #[error("unexpected character {ch:?} at byte {pos}")]
    BadCharacter { pos: usize, ch: char },
    #[error("unknown word `{word}` at byte {pos}")]
    UnknownWord { pos: usize, word: String },
    #[error("index at byte {pos} does not fit in 64 bits")]
    IndexOverflow { pos: usize },
    #[error("there is no length atom Q0 (byte {pos})")]
    ZeroLengthAtom { pos: usize },
    #[error("block index must be positive (byte {pos})")]
    ZeroBlockIndex { pos: usize },
    #[error("{what} at byte {pos} must be classical (no Q atoms, boxes or updates)")]
    NotClassical { pos: usize, what: &'static str },
    #[error("indices of blocks and acceptance conditions must be positive")]
    ZeroIndex,
}

impl SyntaxError {
    /// Moves the reported position right by `offset` bytes.
    pub fn shifted(self, offset: usize) -> Self {
        use SyntaxError::*;
        match self {
            Unexpected { pos, found, expected } => Unexpected { pos: pos + offset, found, expected },
            UnexpectedEnd { pos, expected } => UnexpectedEnd { pos: pos + offset, expected },
            BadCharacter { pos, ch } => BadCharacter { pos: pos + offset, ch },
            UnknownWord { pos, word } => UnknownWord { pos: pos + offset, word },
            IndexOverflow { pos } => IndexOverflow { pos: pos + offset },
            ZeroLengthAtom { pos } => ZeroLengthAtom { pos: pos + offset },
            ZeroBlockIndex { pos } => ZeroBlockIndex { pos: pos + offset },
            NotClassical { pos, what } => NotClassical { pos: pos + offset, what },
            ZeroIndex => ZeroIndex,
        }
    }
}
