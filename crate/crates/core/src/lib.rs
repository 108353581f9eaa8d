//! Analysis and transformation toolkit for canonical logic programs:
//! normal programs extended with the doubly negated rule element `not not x`.
//!
//! The crate provides
//!
//! * an immutable program IR with a text parser and renderer ([`program`],
//!   [`parse`]),
//! * answer set semantics by reduct and least fixpoint, with exhaustive
//!   enumeration as the reference solver ([`semantics`]),
//! * Clark completion, positive dependency graphs, loop enumeration and
//!   loop formulas, plus the completion-equivalence checks built on them
//!   ([`formula`], [`completion`]),
//! * an answer-set-preserving simplification pipeline that rewrites parity
//!   programs into loop-free (pure) form ([`simplify`]),
//! * semantics and translations for three companion formalisms: programs
//!   with cardinality constraints and choice rules, definite causal
//!   theories, and two-valued programs ([`formalisms`]),
//! * parameterized parity encoders for all supported formalisms with
//!   closed-form size accounting ([`generate`]), and
//! * seeded random instance generators for differential testing ([`random`]).
//!
//! Everything is pure and immutable after construction; all enumeration
//! entry points take explicit caps and refuse instances beyond desk scale
//! instead of silently truncating.

pub mod brute;
pub mod completion;
pub mod formalisms;
pub mod formula;
pub mod generate;
pub mod parse;
pub mod program;
pub mod random;
mod scan;
pub mod semantics;
pub mod simplify;

pub use parse::{parse_program, ParseError};
pub use program::{
    body_profile, Body, BodyProfile, Head, Interpretation, Program, Rule, RuleElement, Var,
};
pub use semantics::{
    answer_set_report, answer_sets, is_answer_set, represents_parity, AnswerSetReport,
    BasicProgram, SolveError, DEFAULT_SOLVE_CAP,
};
