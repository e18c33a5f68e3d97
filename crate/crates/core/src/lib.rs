//! A dynamic epistemic logic of blockchain updates.

pub mod chain;
pub mod corpus;
pub mod proofcheck;
pub mod propositional;
pub mod reduction;
pub mod semantics;
pub mod sim;
pub mod syntax;
pub mod validity;
