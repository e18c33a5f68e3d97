//! Runs the code listings of the guide in `book/` as doc-tests, one module
//! per chapter so a failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/formulas.md")]
pub mod formulas {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/updates.md")]
pub mod updates {}
#[doc = include_str!("../../../book/src/reduction.md")]
pub mod reduction {}
#[doc = include_str!("../../../book/src/validity.md")]
pub mod validity {}
#[doc = include_str!("../../../book/src/proofs.md")]
pub mod proofs {}
#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
