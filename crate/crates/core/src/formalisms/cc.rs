//! Programs with cardinality constraints and choice rules.
//!
//! The supported fragment is the one needed for parity encodings: choice
//! rules `{x1; ...; xk}.` with empty bodies, and rules whose heads are an
//! atom or `#false` and whose bodies mix atoms, `not` atoms, and
//! cardinality constraints `l {lits} u`.
//!
//! Answer set semantics, reduct style: a candidate interpretation fixes
//! every negative literal and every cardinality constraint; choice rules
//! support exactly the chosen atoms; the candidate survives iff it equals
//! the least set derivable from choice support plus the positive rule
//! part, and no `#false` rule fires.
//!
//! Text form, one statement per `.`:
//!
//! ```text
//! {x1; x2}.
//! #false :- 0 {x1; x2; x3} 0.
//! x1 :- x2, not x3, 1 {x1; not x2} 2.
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::parse::ParseError;
use crate::program::{Interpretation, Var};
use crate::scan::Scanner;
use crate::semantics::{AnswerSetReport, SolveError};

use super::Literal;

/// `l {lits} u`: satisfied when the number of satisfied literals lies
/// within the bounds.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CardConstraint {
    lower: usize,
    upper: usize,
    literals: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed bounds {lower} {{...}} {upper} over {len} literals")]
pub struct MalformedBounds {
    pub lower: usize,
    pub upper: usize,
    pub len: usize,
}

impl CardConstraint {
    /// Requires `lower <= upper <= |literals|`; the literal list is
    /// deduplicated as a set.
    pub fn new(
        lower: usize,
        upper: usize,
        literals: impl IntoIterator<Item = Literal>,
    ) -> Result<Self, MalformedBounds> {
        let mut lits: Vec<Literal> = literals.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        if lower > upper || upper > lits.len() {
            return Err(MalformedBounds { lower, upper, len: lits.len() });
        }
        Ok(CardConstraint { lower, upper, literals: lits })
    }

    pub fn bounds(&self) -> (usize, usize) {
        (self.lower, self.upper)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn satisfied_by(&self, interp: &Interpretation) -> bool {
        let count = self.literals.iter().filter(|l| l.holds_in(interp)).count();
        self.lower <= count && count <= self.upper
    }
}

impl fmt::Display for CardConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.lower)?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            match l {
                Literal::Pos(v) => write!(f, "{v}")?,
                Literal::Neg(v) => write!(f, "not {v}")?,
            }
        }
        write!(f, "}} {}", self.upper)
    }
}

/// Whether an interpretation satisfies a cardinality constraint.
pub fn cc_satisfies(interp: &Interpretation, constraint: &CardConstraint) -> bool {
    constraint.satisfied_by(interp)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum CcElement {
    Atom(Var),
    Not(Var),
    Card(CardConstraint),
}

impl fmt::Display for CcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CcElement::Atom(v) => write!(f, "{v}"),
            CcElement::Not(v) => write!(f, "not {v}"),
            CcElement::Card(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CcHead {
    Atom(Var),
    Bot,
    /// `{x1; ...; xk}`, always with an empty body in this fragment.
    Choice(Vec<Var>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CcRule {
    pub head: CcHead,
    pub body: Vec<CcElement>,
}

impl fmt::Display for CcRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            CcHead::Atom(v) => write!(f, "{v}")?,
            CcHead::Bot => write!(f, "#false")?,
            CcHead::Choice(vars) => {
                write!(f, "{{")?;
                for (i, v) in vars.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")?;
            }
        }
        if !self.body.is_empty() {
            write!(f, " :- ")?;
            for (i, e) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, ".")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CcProgram {
    n: u32,
    rules: Vec<CcRule>,
}

impl CcProgram {
    pub fn new(n: u32, rules: Vec<CcRule>) -> Self {
        CcProgram { n, rules }
    }

    pub fn signature_size(&self) -> u32 {
        self.n
    }

    pub fn rules(&self) -> &[CcRule] {
        &self.rules
    }

    /// Rule count.
    pub fn size(&self) -> usize {
        self.rules.len()
    }

    /// Number of cardinality constraints across all bodies; reported
    /// separately because the two size conventions differ.
    pub fn constraint_count(&self) -> usize {
        self.rules
            .iter()
            .map(|r| r.body.iter().filter(|e| matches!(e, CcElement::Card(_))).count())
            .sum()
    }

    fn choice_atoms(&self) -> BTreeSet<Var> {
        self.rules
            .iter()
            .filter_map(|r| match &r.head {
                CcHead::Choice(vars) => Some(vars.iter().copied()),
                _ => None,
            })
            .flatten()
            .collect()
    }
}

impl fmt::Display for CcProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#vars {}.", self.n)?;
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// All answer sets by exhaustive candidate enumeration.
pub fn cc_answer_sets(
    p: &CcProgram,
    id: impl Into<String>,
    cap: u32,
) -> Result<AnswerSetReport, SolveError> {
    let n = p.signature_size();
    crate::semantics::ensure_enumerable(n, cap)?;
    let choice = p.choice_atoms();
    let sets = Interpretation::all(n).filter(|i| is_cc_answer_set(p, &choice, i)).collect();
    Ok(AnswerSetReport::new(id.into(), n, sets))
}

fn is_cc_answer_set(p: &CcProgram, choice: &BTreeSet<Var>, interp: &Interpretation) -> bool {
    let n = p.signature_size();
    // Fixpoint from choice support plus positive rule part; negative
    // literals and cardinality constraints are evaluated on the candidate.
    let mut derived = Interpretation::empty(n);
    for &v in choice {
        if interp.contains(v) {
            derived.set(v, true);
        }
    }
    loop {
        let mut changed = false;
        for rule in &p.rules {
            let head = match &rule.head {
                CcHead::Atom(v) => *v,
                _ => continue,
            };
            if derived.contains(head) {
                continue;
            }
            if body_fires(rule, interp, &derived) {
                derived.set(head, true);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if derived != *interp {
        return false;
    }
    // Constraint rules judge the candidate classically.
    p.rules.iter().all(|rule| match &rule.head {
        CcHead::Bot => !body_fires(rule, interp, &derived),
        _ => true,
    })
}

fn body_fires(rule: &CcRule, interp: &Interpretation, derived: &Interpretation) -> bool {
    rule.body.iter().all(|e| match e {
        CcElement::Atom(v) => derived.contains(*v),
        CcElement::Not(v) => !interp.contains(*v),
        CcElement::Card(c) => c.satisfied_by(interp),
    })
}

/// Parses the text form. Uses the same `#vars` header convention as
/// canonical programs; without it the signature is the largest index.
pub fn parse_cc(text: &str) -> Result<CcProgram, ParseError> {
    let mut s = Scanner::new(text);
    let mut header: Option<u32> = None;
    let mut rules = Vec::new();
    let mut max_var = 0u32;

    while !s.at_end() {
        if s.eat('{') {
            let vars = parse_var_list(&mut s, &mut max_var)?;
            s.expect('}')?;
            if !s.eat('.') {
                return Err(s.error("choice rules take no body in this fragment"));
            }
            rules.push(CcRule { head: CcHead::Choice(vars), body: Vec::new() });
            continue;
        }
        let (line, col) = s.position();
        let tok = s.ident().ok_or_else(|| s.error("expected a rule"))?;
        if tok == "#vars" {
            if header.is_some() || !rules.is_empty() {
                return Err(ParseError {
                    line,
                    col,
                    message: "`#vars` header must come first and only once".into(),
                });
            }
            header = Some(
                s.integer().ok_or_else(|| s.error("expected variable count"))??,
            );
            s.expect('.')?;
            continue;
        }
        let head = match tok.as_str() {
            "#false" => CcHead::Bot,
            name => CcHead::Atom(named_var(name, line, col, &mut max_var)?),
        };
        let mut body = Vec::new();
        if !s.eat('.') {
            if !s.eat_str(":-") {
                return Err(s.error("expected `.` or `:-` after rule head"));
            }
            loop {
                body.push(parse_cc_element(&mut s, &mut max_var)?);
                if s.eat(',') {
                    continue;
                }
                s.expect('.')?;
                break;
            }
        }
        rules.push(CcRule { head, body });
    }

    let n = header.unwrap_or(max_var);
    check_range(&rules, n)?;
    Ok(CcProgram::new(n, rules))
}

fn parse_cc_element(s: &mut Scanner, max_var: &mut u32) -> Result<CcElement, ParseError> {
    if let Some(lower) = s.integer() {
        let lower = lower? as usize;
        s.expect('{')?;
        let mut literals = Vec::new();
        loop {
            literals.push(parse_cc_literal(s, max_var)?);
            if s.eat(';') {
                continue;
            }
            s.expect('}')?;
            break;
        }
        let (line, col) = s.position();
        let upper = s
            .integer()
            .ok_or_else(|| s.error("expected upper bound after `}`"))?? as usize;
        let len = literals.len();
        let constraint = CardConstraint::new(lower, upper, literals).map_err(|e| ParseError {
            line,
            col,
            message: format!("{e} ({len} distinct literals)"),
        })?;
        return Ok(CcElement::Card(constraint));
    }
    let (line, col) = s.position();
    let tok = s.ident().ok_or_else(|| s.error("expected a body element"))?;
    if tok == "not" {
        let (line, col) = s.position();
        let name = s.ident().ok_or_else(|| s.error("expected a variable after `not`"))?;
        return Ok(CcElement::Not(named_var(&name, line, col, max_var)?));
    }
    Ok(CcElement::Atom(named_var(&tok, line, col, max_var)?))
}

fn parse_cc_literal(s: &mut Scanner, max_var: &mut u32) -> Result<Literal, ParseError> {
    let (line, col) = s.position();
    let tok = s.ident().ok_or_else(|| s.error("expected a literal"))?;
    if tok == "not" {
        let (line, col) = s.position();
        let name = s.ident().ok_or_else(|| s.error("expected a variable after `not`"))?;
        return Ok(Literal::Neg(named_var(&name, line, col, max_var)?));
    }
    Ok(Literal::Pos(named_var(&tok, line, col, max_var)?))
}

fn parse_var_list(s: &mut Scanner, max_var: &mut u32) -> Result<Vec<Var>, ParseError> {
    let mut vars = Vec::new();
    loop {
        let (line, col) = s.position();
        let tok = s.ident().ok_or_else(|| s.error("expected a variable"))?;
        vars.push(named_var(&tok, line, col, max_var)?);
        if !s.eat(';') {
            break;
        }
    }
    vars.sort_unstable();
    vars.dedup();
    Ok(vars)
}

fn named_var(name: &str, line: u32, col: u32, max_var: &mut u32) -> Result<Var, ParseError> {
    match crate::formula::variable_of(name) {
        Some(v) => {
            *max_var = (*max_var).max(v.0);
            Ok(v)
        }
        None => Err(ParseError {
            line,
            col,
            message: format!("expected a variable of the form x<i>, found `{name}`"),
        }),
    }
}

fn check_range(rules: &[CcRule], n: u32) -> Result<(), ParseError> {
    let mut vars: Vec<Var> = Vec::new();
    for r in rules {
        match &r.head {
            CcHead::Atom(v) => vars.push(*v),
            CcHead::Choice(vs) => vars.extend(vs),
            CcHead::Bot => {}
        }
        for e in &r.body {
            match e {
                CcElement::Atom(v) | CcElement::Not(v) => vars.push(*v),
                CcElement::Card(c) => vars.extend(c.literals().iter().map(|l| l.var())),
            }
        }
    }
    for v in vars {
        if v.0 > n {
            return Err(ParseError {
                line: 0,
                col: 0,
                message: format!("atom x{} exceeds the declared signature of {n} variables", v.0),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::DEFAULT_SOLVE_CAP;

    fn report_texts(p: &CcProgram) -> Vec<String> {
        cc_answer_sets(p, "t", DEFAULT_SOLVE_CAP)
            .unwrap()
            .answer_sets
            .iter()
            .map(|i| i.to_string())
            .collect()
    }

    #[test]
    fn constraint_satisfaction_by_counting() {
        let c = CardConstraint::new(
            1,
            1,
            [Literal::Pos(Var(1)), Literal::Pos(Var(2)), Literal::Pos(Var(3))],
        )
        .unwrap();
        let i100 = Interpretation::parse("100").unwrap();
        assert!(cc_satisfies(&i100, &c));
        let wide = CardConstraint::new(
            2,
            3,
            [Literal::Pos(Var(1)), Literal::Pos(Var(2)), Literal::Pos(Var(3))],
        )
        .unwrap();
        assert!(!cc_satisfies(&i100, &wide));
        assert!(cc_satisfies(&Interpretation::parse("011").unwrap(), &wide));
    }

    #[test]
    fn negative_literals_count_when_false() {
        let c = CardConstraint::new(2, 2, [Literal::Pos(Var(1)), Literal::Neg(Var(2))]).unwrap();
        assert!(cc_satisfies(&Interpretation::parse("10").unwrap(), &c));
        assert!(!cc_satisfies(&Interpretation::parse("11").unwrap(), &c));
    }

    #[test]
    fn bounds_validation() {
        assert!(CardConstraint::new(2, 1, [Literal::Pos(Var(1))]).is_err());
        assert!(CardConstraint::new(0, 2, [Literal::Pos(Var(1))]).is_err());
        assert!(parse_cc("#false :- 0 {x1} 2.").is_err());
    }

    #[test]
    fn parity_three_program() {
        let p = parse_cc(
            "{x1; x2; x3}.\n\
             #false :- 0 {x1; x2; x3} 0.\n\
             #false :- 2 {x1; x2; x3} 2.",
        )
        .unwrap();
        assert_eq!(report_texts(&p), ["001", "010", "100", "111"]);
        assert_eq!(p.size(), 3);
        assert_eq!(p.constraint_count(), 2);
    }

    #[test]
    fn lone_choice_rule() {
        let p = parse_cc("{x1}.").unwrap();
        assert_eq!(report_texts(&p), ["0", "1"]);
    }

    #[test]
    fn underived_atoms_block_candidates() {
        // No rule supports x1, so only the empty set survives.
        let p = parse_cc("#vars 1.").unwrap();
        assert_eq!(report_texts(&p), ["0"]);
    }

    #[test]
    fn positive_part_feeds_fixpoint() {
        let p = parse_cc("{x1}.\nx2 :- x1.\nx3 :- x2, not x1.").unwrap();
        // x2 follows x1; x3 can never fire because it needs x1 false.
        assert_eq!(report_texts(&p), ["000", "110"]);
    }

    #[test]
    fn render_parses_back() {
        let p = parse_cc("{x1; x2}.\n#false :- 0 {x1; not x2} 1, not x1.\nx2 :- x1.").unwrap();
        assert_eq!(parse_cc(&p.to_string()).unwrap(), p);
    }
}
