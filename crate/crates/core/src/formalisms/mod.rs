//! Companion formalisms with the same expressive power as propositional
//! formulas: programs with cardinality constraints and choice rules
//! ([`cc`]), definite causal theories ([`dt`]) and two-valued programs
//! ([`tv`]), plus the translations into two-valued programs.

use std::fmt;

use crate::program::{Interpretation, Var};

pub mod cc;
pub mod dt;
pub mod tv;

/// A variable or its classical negation.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Literal {
    Pos(Var),
    Neg(Var),
}

impl Literal {
    pub fn var(self) -> Var {
        match self {
            Literal::Pos(v) | Literal::Neg(v) => v,
        }
    }

    pub fn negated(self) -> Literal {
        match self {
            Literal::Pos(v) => Literal::Neg(v),
            Literal::Neg(v) => Literal::Pos(v),
        }
    }

    pub fn holds_in(self, interp: &Interpretation) -> bool {
        match self {
            Literal::Pos(v) => interp.contains(v),
            Literal::Neg(v) => !interp.contains(v),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(v) => write!(f, "{v}"),
            Literal::Neg(v) => write!(f, "-{v}"),
        }
    }
}

/// A consistent, signature-covering set of literals has exactly one model;
/// this resolves "`I` is the unique model of the reduct" for both definite
/// theories and two-valued programs.
pub(crate) fn literals_pin_unique_model(
    literals: &std::collections::BTreeSet<Literal>,
    n: u32,
    interp: &Interpretation,
) -> bool {
    let consistent = literals.iter().all(|l| !literals.contains(&l.negated()));
    let covers = (1..=n).all(|i| {
        literals.contains(&Literal::Pos(Var(i))) || literals.contains(&Literal::Neg(Var(i)))
    });
    consistent && covers && literals.iter().all(|l| l.holds_in(interp))
}
