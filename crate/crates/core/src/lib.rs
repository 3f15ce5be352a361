//! Verification of tight logic programs with input and output against
//! first-order specifications.
//!
//! The pipeline parses a program and a specification, checks tightness and
//! absence of private recursion, builds the program's completion, simplifies
//! it, and emits TPTP proof tasks for an external theorem prover. The
//! [`oracle`] module evaluates the same objects on bounded domains.

pub mod analysis;
pub mod completion;
pub mod error;
mod lexer;
pub mod logic;
pub mod oracle;
pub mod prover;
pub mod simplify;
pub mod spec;
pub mod syntax;
pub mod tptp;
pub mod translate;

pub use error::Error;
pub use logic::{Formula, Predicate, PredicateVariable, SecondOrderSentence, Sort, Term, Variable};
pub use syntax::{parse_program, Precomputed, PredicateSymbol, Program, ProgramTerm, Rule};
