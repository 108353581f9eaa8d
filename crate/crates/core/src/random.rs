//! Seeded random instances for differential testing.
//!
//! The generator is a self-contained splitmix64 stream, so identical seeds
//! produce byte-identical instances on every platform and in every build.
//!
//! Distributions, documented once here and used everywhere:
//!
//! * rule count uniform in `0..=max_rules`;
//! * heads uniform over the signature variables plus `#false`;
//! * body sizes uniform in `0..=3` before set deduplication;
//! * body element kinds weighted `x`:4, `not x`:4, `not not x`:4 (when
//!   double negation is allowed), `#true`:1, `#false`:1, with the variable
//!   uniform over the signature.

use crate::formalisms::dt::{CausalTheory, DtHead, DtRule};
use crate::formalisms::Literal;
use crate::formula::PropFormula;
use crate::program::{Body, Head, Program, Rule, RuleElement, Var};

/// Deterministic splitmix64 stream.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (`bound > 0`), by 128-bit multiply-shift.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    pub fn range_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// Shape of the random programs.
#[derive(Clone, Debug)]
pub struct ProgramShape {
    pub n: u32,
    pub max_rules: usize,
    pub max_body: usize,
    /// Allow `not x` elements; off for basic programs.
    pub negation: bool,
    /// Allow `not not x` elements; off for normal programs.
    pub double_negation: bool,
}

impl ProgramShape {
    pub fn canonical(n: u32, max_rules: usize) -> Self {
        ProgramShape { n, max_rules, max_body: 3, negation: true, double_negation: true }
    }

    pub fn normal(n: u32, max_rules: usize) -> Self {
        ProgramShape { n, max_rules, max_body: 3, negation: true, double_negation: false }
    }

    pub fn basic(n: u32, max_rules: usize) -> Self {
        ProgramShape { n, max_rules, max_body: 3, negation: false, double_negation: false }
    }
}

fn random_element(rng: &mut Rng, shape: &ProgramShape) -> RuleElement {
    let mut weights = 6;
    if shape.negation {
        weights += 4;
    }
    if shape.double_negation {
        weights += 4;
    }
    let roll = rng.below(weights);
    let var = Var(rng.range_inclusive(1, shape.n as u64) as u32);
    match roll {
        0..=3 => RuleElement::Atom(var),
        4 => RuleElement::Top,
        5 => RuleElement::Bot,
        6..=9 if shape.negation => RuleElement::Not(var),
        _ => RuleElement::NotNot(var),
    }
}

/// A random canonical (or normal) program over the shape's signature.
pub fn random_program(rng: &mut Rng, shape: &ProgramShape) -> Program {
    let rule_count = rng.range_inclusive(0, shape.max_rules as u64) as usize;
    let rules = (0..rule_count).map(|_| {
        let head_roll = rng.range_inclusive(0, shape.n as u64);
        let head = if head_roll == 0 {
            Head::Bot
        } else {
            Head::Atom(Var(head_roll as u32))
        };
        let body_len = rng.range_inclusive(0, shape.max_body as u64) as usize;
        let body = Body::new((0..body_len).map(|_| random_element(rng, shape)));
        Rule::new(head, body)
    });
    Program::new(shape.n, rules.collect::<Vec<_>>())
}

/// A random formula of bounded depth over `x1..xn`. Leaves are mostly
/// variables; inner nodes cover every connective.
pub fn random_formula(rng: &mut Rng, n: u32, depth: usize) -> PropFormula {
    let leaf = depth == 0 || rng.chance(1, 4);
    if leaf {
        return match rng.below(8) {
            0 => PropFormula::Top,
            1 => PropFormula::Bot,
            _ => PropFormula::Var(Var(rng.range_inclusive(1, n as u64) as u32)),
        };
    }
    match rng.below(5) {
        0 => PropFormula::not(random_formula(rng, n, depth - 1)),
        1 => {
            let arity = rng.range_inclusive(2, 3) as usize;
            PropFormula::and((0..arity).map(|_| random_formula(rng, n, depth - 1)).collect())
        }
        2 => {
            let arity = rng.range_inclusive(2, 3) as usize;
            PropFormula::or((0..arity).map(|_| random_formula(rng, n, depth - 1)).collect())
        }
        3 => PropFormula::implies(
            random_formula(rng, n, depth - 1),
            random_formula(rng, n, depth - 1),
        ),
        _ => PropFormula::iff(
            random_formula(rng, n, depth - 1),
            random_formula(rng, n, depth - 1),
        ),
    }
}

fn random_literal(rng: &mut Rng, n: u32) -> Literal {
    let v = Var(rng.range_inclusive(1, n as u64) as u32);
    if rng.chance(1, 2) {
        Literal::Pos(v)
    } else {
        Literal::Neg(v)
    }
}

/// A random definite theory whose bodies are conjunctions of literals;
/// one head in `2n + 1` is `#false`.
pub fn random_theory(rng: &mut Rng, n: u32, max_rules: usize) -> CausalTheory {
    let rule_count = rng.range_inclusive(0, max_rules as u64) as usize;
    let rules = (0..rule_count)
        .map(|_| {
            let head = if rng.chance(1, 2 * n as u64 + 1) {
                DtHead::Bot
            } else {
                DtHead::Lit(random_literal(rng, n))
            };
            let len = rng.range_inclusive(0, 3) as usize;
            let body = PropFormula::and(
                (0..len)
                    .map(|_| match random_literal(rng, n) {
                        Literal::Pos(v) => PropFormula::Var(v),
                        Literal::Neg(v) => PropFormula::not(PropFormula::Var(v)),
                    })
                    .collect(),
            );
            DtRule { head, body }
        })
        .collect();
    CausalTheory::new(n, rules)
}
