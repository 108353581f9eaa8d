//! Propositional formulas with n-ary conjunction and disjunction, the
//! gate-counting size and depth metrics, exhaustive model enumeration, and
//! a text syntax.
//!
//! Size is the number of connectives: every non-variable node counts one,
//! including `#true`/`#false` (zero-ary) and each unbounded fan-in `&`/`|`
//! node. Depth counts the `&`, `|`, `->`, `<->` levels on the longest
//! root-to-leaf path; negation is transparent for depth.
//!
//! Text form (infix, `!` binds tightest, then `&`, `|`, `->`, `<->`):
//!
//! ```text
//! f := f '<->' f | f '->' f | f '|' f | f '&' f | '!' f | '-' f
//!    | '(' f ')' | 'x'<i> | '#true' | '#false'
//! ```

use std::fmt;

use thiserror::Error;

use crate::parse::ParseError;
use crate::program::{Interpretation, Var};
use crate::scan::Scanner;
use crate::semantics::SolveError;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PropFormula {
    Var(Var),
    Top,
    Bot,
    Not(Box<PropFormula>),
    And(Vec<PropFormula>),
    Or(Vec<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn var(i: u32) -> Self {
        PropFormula::Var(Var(i))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PropFormula) -> Self {
        PropFormula::Not(Box::new(f))
    }

    /// N-ary conjunction; empty is `#true`, a single conjunct collapses.
    pub fn and(fs: Vec<PropFormula>) -> Self {
        match fs.len() {
            0 => PropFormula::Top,
            1 => fs.into_iter().next().unwrap(),
            _ => PropFormula::And(fs),
        }
    }

    /// N-ary disjunction; empty is `#false`, a single disjunct collapses.
    pub fn or(fs: Vec<PropFormula>) -> Self {
        match fs.len() {
            0 => PropFormula::Bot,
            1 => fs.into_iter().next().unwrap(),
            _ => PropFormula::Or(fs),
        }
    }

    pub fn implies(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, interp: &Interpretation) -> bool {
        match self {
            PropFormula::Var(v) => interp.contains(*v),
            PropFormula::Top => true,
            PropFormula::Bot => false,
            PropFormula::Not(f) => !f.eval(interp),
            PropFormula::And(fs) => fs.iter().all(|f| f.eval(interp)),
            PropFormula::Or(fs) => fs.iter().any(|f| f.eval(interp)),
            PropFormula::Implies(a, b) => !a.eval(interp) || b.eval(interp),
            PropFormula::Iff(a, b) => a.eval(interp) == b.eval(interp),
        }
    }

    /// Number of connectives (gates).
    pub fn size(&self) -> usize {
        match self {
            PropFormula::Var(_) => 0,
            PropFormula::Top | PropFormula::Bot => 1,
            PropFormula::Not(f) => 1 + f.size(),
            PropFormula::And(fs) | PropFormula::Or(fs) => {
                1 + fs.iter().map(|f| f.size()).sum::<usize>()
            }
            PropFormula::Implies(a, b) | PropFormula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Connective depth; negation is not counted.
    pub fn depth(&self) -> usize {
        match self {
            PropFormula::Var(_) | PropFormula::Top | PropFormula::Bot => 0,
            PropFormula::Not(f) => f.depth(),
            PropFormula::And(fs) | PropFormula::Or(fs) => {
                1 + fs.iter().map(|f| f.depth()).max().unwrap_or(0)
            }
            PropFormula::Implies(a, b) | PropFormula::Iff(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Largest variable index mentioned, or 0.
    pub fn max_var(&self) -> u32 {
        match self {
            PropFormula::Var(v) => v.0,
            PropFormula::Top | PropFormula::Bot => 0,
            PropFormula::Not(f) => f.max_var(),
            PropFormula::And(fs) | PropFormula::Or(fs) => {
                fs.iter().map(|f| f.max_var()).max().unwrap_or(0)
            }
            PropFormula::Implies(a, b) | PropFormula::Iff(a, b) => a.max_var().max(b.max_var()),
        }
    }
}

/// `(size, depth)` of a formula.
pub fn formula_metrics(f: &PropFormula) -> (usize, usize) {
    (f.size(), f.depth())
}

/// The models of a conjunction of formulas over `x1..xn`, in lexicographic
/// order, by exhaustive enumeration.
pub fn models(formulas: &[PropFormula], n: u32, cap: u32) -> Result<Vec<Interpretation>, SolveError> {
    crate::semantics::ensure_enumerable(n, cap)?;
    let mut out: Vec<Interpretation> = Interpretation::all(n)
        .filter(|i| formulas.iter().all(|f| f.eval(i)))
        .collect();
    out.sort();
    Ok(out)
}

// Precedence levels for printing and parsing; higher binds tighter.
const LEVEL_IFF: u8 = 1;
const LEVEL_IMPLIES: u8 = 2;
const LEVEL_OR: u8 = 3;
const LEVEL_AND: u8 = 4;
const LEVEL_ATOM: u8 = 5;

fn level(f: &PropFormula) -> u8 {
    match f {
        PropFormula::Iff(..) => LEVEL_IFF,
        PropFormula::Implies(..) => LEVEL_IMPLIES,
        PropFormula::Or(_) => LEVEL_OR,
        PropFormula::And(_) => LEVEL_AND,
        _ => LEVEL_ATOM,
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &PropFormula, min: u8) -> fmt::Result {
            if level(c) < min {
                write!(f, "(")?;
                write!(f, "{c}")?;
                write!(f, ")")
            } else {
                write!(f, "{c}")
            }
        }
        match self {
            PropFormula::Var(v) => write!(f, "{v}"),
            PropFormula::Top => write!(f, "#true"),
            PropFormula::Bot => write!(f, "#false"),
            PropFormula::Not(inner) => {
                write!(f, "!")?;
                child(f, inner, LEVEL_ATOM)
            }
            PropFormula::And(fs) => {
                for (i, c) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    child(f, c, LEVEL_AND + 1)?;
                }
                Ok(())
            }
            PropFormula::Or(fs) => {
                // Disjuncts that are themselves conjunctions keep their
                // parentheses for readability.
                for (i, c) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    child(f, c, LEVEL_AND + 1)?;
                }
                Ok(())
            }
            PropFormula::Implies(a, b) => {
                child(f, a, LEVEL_IMPLIES + 1)?;
                write!(f, " -> ")?;
                child(f, b, LEVEL_IMPLIES)
            }
            PropFormula::Iff(a, b) => {
                child(f, a, LEVEL_IFF + 1)?;
                write!(f, " <-> ")?;
                child(f, b, LEVEL_IFF)
            }
        }
    }
}

/// Parses one formula, requiring the input to be fully consumed.
pub fn parse_formula(text: &str) -> Result<PropFormula, ParseError> {
    let mut s = Scanner::new(text);
    let f = parse_at(&mut s, LEVEL_IFF)?;
    s.rest_is_empty()?;
    Ok(f)
}

pub(crate) fn parse_at(s: &mut Scanner, min: u8) -> Result<PropFormula, ParseError> {
    let mut lhs = parse_unary(s)?;
    loop {
        if min <= LEVEL_AND && s.eat('&') {
            let rhs = parse_at(s, LEVEL_AND + 1)?;
            lhs = flatten_and(lhs, rhs);
        } else if min <= LEVEL_OR && s.eat('|') {
            let rhs = parse_at(s, LEVEL_OR + 1)?;
            lhs = flatten_or(lhs, rhs);
        } else if min <= LEVEL_IMPLIES && s.eat_str("->") {
            let rhs = parse_at(s, LEVEL_IMPLIES)?;
            lhs = PropFormula::implies(lhs, rhs);
        } else if min <= LEVEL_IFF && s.eat_str("<->") {
            let rhs = parse_at(s, LEVEL_IFF)?;
            lhs = PropFormula::iff(lhs, rhs);
        } else {
            return Ok(lhs);
        }
    }
}

fn flatten_and(lhs: PropFormula, rhs: PropFormula) -> PropFormula {
    let mut parts = match lhs {
        PropFormula::And(fs) => fs,
        other => vec![other],
    };
    match rhs {
        PropFormula::And(fs) => parts.extend(fs),
        other => parts.push(other),
    }
    PropFormula::And(parts)
}

fn flatten_or(lhs: PropFormula, rhs: PropFormula) -> PropFormula {
    let mut parts = match lhs {
        PropFormula::Or(fs) => fs,
        other => vec![other],
    };
    match rhs {
        PropFormula::Or(fs) => parts.extend(fs),
        other => parts.push(other),
    }
    PropFormula::Or(parts)
}

fn parse_unary(s: &mut Scanner) -> Result<PropFormula, ParseError> {
    if s.eat('!') || s.eat('-') {
        return Ok(PropFormula::not(parse_unary(s)?));
    }
    if s.eat('(') {
        let f = parse_at(s, LEVEL_IFF)?;
        s.expect(')')?;
        return Ok(f);
    }
    let (line, col) = s.position();
    let tok = s.ident().ok_or_else(|| s.error("expected a formula"))?;
    match tok.as_str() {
        "#true" => Ok(PropFormula::Top),
        "#false" => Ok(PropFormula::Bot),
        name => match variable_of(name) {
            Some(v) => Ok(PropFormula::Var(v)),
            None => Err(ParseError {
                line,
                col,
                message: format!("expected a variable of the form x<i>, found `{name}`"),
            }),
        },
    }
}

pub(crate) fn variable_of(name: &str) -> Option<Var> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let i: u32 = digits.parse().ok()?;
    if i == 0 {
        None
    } else {
        Some(Var(i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula {index} is not CNF-shaped: {reason}")]
pub struct NotCnf {
    pub index: usize,
    pub reason: String,
}

/// Exports a conjunction of clause-shaped formulas as DIMACS CNF without
/// introducing auxiliary variables. A formula qualifies when it is a
/// literal, a disjunction of literals, a negated conjunction of literals,
/// an equivalence between a variable and a constant (folded to a unit
/// clause), `#true` (dropped) or `#false` (the empty clause); conjunctions
/// of such shapes are flattened. Anything needing distribution or fresh
/// variables is refused.
pub fn to_dimacs(formulas: &[PropFormula], n: u32) -> Result<String, NotCnf> {
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for (index, f) in formulas.iter().enumerate() {
        collect_clauses(f, index, &mut clauses)?;
    }
    let mut out = format!("p cnf {} {}\n", n, clauses.len());
    for clause in clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    Ok(out)
}

fn collect_clauses(f: &PropFormula, index: usize, out: &mut Vec<Vec<i64>>) -> Result<(), NotCnf> {
    match f {
        PropFormula::Top => Ok(()),
        PropFormula::Bot => {
            out.push(Vec::new());
            Ok(())
        }
        // Negated constants fold: !#true is the empty clause, !#false drops.
        PropFormula::Not(inner) if matches!(inner.as_ref(), PropFormula::Top) => {
            out.push(Vec::new());
            Ok(())
        }
        PropFormula::Not(inner) if matches!(inner.as_ref(), PropFormula::Bot) => Ok(()),
        PropFormula::And(fs) => {
            for c in fs {
                collect_clauses(c, index, out)?;
            }
            Ok(())
        }
        other => {
            out.push(clause_literals(other, index)?);
            Ok(())
        }
    }
}

fn clause_literals(f: &PropFormula, index: usize) -> Result<Vec<i64>, NotCnf> {
    match f {
        PropFormula::Or(fs) => fs.iter().map(|l| literal(l, index)).collect(),
        PropFormula::Not(inner) => match inner.as_ref() {
            // De Morgan at the top of a constraint: !(a & b & c).
            PropFormula::And(fs) => fs
                .iter()
                .map(|l| literal(l, index).map(|x| -x))
                .collect(),
            _ => Ok(vec![literal(f, index)?]),
        },
        // Constant folding only: x <-> #false is the unit clause -x.
        PropFormula::Iff(a, b) => match (a.as_ref(), b.as_ref()) {
            (PropFormula::Var(v), PropFormula::Bot) | (PropFormula::Bot, PropFormula::Var(v)) => {
                Ok(vec![-(v.0 as i64)])
            }
            (PropFormula::Var(v), PropFormula::Top) | (PropFormula::Top, PropFormula::Var(v)) => {
                Ok(vec![v.0 as i64])
            }
            _ => Err(NotCnf {
                index,
                reason: format!("`{f}` needs distribution to become clauses"),
            }),
        },
        _ => Ok(vec![literal(f, index)?]),
    }
}

fn literal(f: &PropFormula, index: usize) -> Result<i64, NotCnf> {
    match f {
        PropFormula::Var(v) => Ok(v.0 as i64),
        PropFormula::Not(inner) => match inner.as_ref() {
            PropFormula::Var(v) => Ok(-(v.0 as i64)),
            // Double classical negation folds back to the variable.
            PropFormula::Not(inner2) => match inner2.as_ref() {
                PropFormula::Var(v) => Ok(v.0 as i64),
                _ => Err(NotCnf { index, reason: format!("`{f}` is not a literal") }),
            },
            _ => Err(NotCnf { index, reason: format!("`{f}` is not a literal") }),
        },
        _ => Err(NotCnf { index, reason: format!("`{f}` is not a literal") }),
    }
}
