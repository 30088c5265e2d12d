//! Core first-order logic toolkit for measuring how robust LLM-based deduction
//! is to noise and counterfactual context edits.
//!
//! Everything in this crate is pure and `no_std` (it only needs `alloc`):
//!
//! * [`ast`]: terms, formulas and problems, plus substitution and alpha-equivalence.
//! * [`syntax`]: parsers and printers for the FOL, R-FOL and TPTP surface syntaxes.
//! * [`lint`]: the three semantic warning heuristics used as soft feedback.
//! * [`prover`]: clausification and a given-clause resolution prover.
//! * [`perturb`]: noise injection and counterfactual negation of deduction samples.
//! * [`pipeline`]: prompt assembly, answer extraction and the error-recovery loop.
//! * [`metrics`]: accuracy, execution rate and valid accuracy.
//!
//! IO, backends that talk to the network, and the command line live in the
//! `folbench` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ast;
pub mod gen;
pub mod lint;
pub mod metrics;
pub mod perturb;
pub mod pipeline;
pub mod prover;
pub mod syntax;

pub use ast::{Answer, Conclusion, Formula, PredicateDecl, Premise, Problem, Term};
pub use syntax::{SyntaxError, SyntaxId};
