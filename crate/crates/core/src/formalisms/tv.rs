//! Two-valued programs: rules `H :- B : G` where `H` and the elements of
//! `B` are literals and the guard `G` is an arbitrary formula, plus the
//! standard translations into this formalism from causal theories,
//! canonical programs, and plain formulas.
//!
//! For a candidate `I`, the reduct keeps `H :- B` for every rule whose
//! guard `I` satisfies; `J` is the least literal set closed under those
//! rules; `I` is a model when `J` is consistent, mentions every signature
//! variable, and `I` satisfies it.
//!
//! A `#false` head is shorthand for two clashing rules on `x1` with the
//! same body and guard; it is expanded on construction, which is why
//! translated programs may carry duplicate rules (the rule list is exactly
//! what the translation emits).
//!
//! Text form: `x1 :- x2, -x3 : -x1 | x2.`; an empty literal part is
//! allowed (`x1 :- : x1.`), and `x1 :- x2.` means guard `#true`.

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{self, PropFormula};
use crate::parse::ParseError;
use crate::program::{Head, Interpretation, Program, RuleElement, Var};
use crate::scan::Scanner;
use crate::semantics::{AnswerSetReport, SolveError};

use super::dt::{CausalTheory, DtHead};
use super::{literals_pin_unique_model, Literal};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TvRule {
    pub head: Literal,
    /// Literal premises, kept sorted and deduplicated.
    pub body: Vec<Literal>,
    pub guard: PropFormula,
}

impl TvRule {
    pub fn new(head: Literal, body: impl IntoIterator<Item = Literal>, guard: PropFormula) -> Self {
        let mut b: Vec<Literal> = body.into_iter().collect();
        b.sort_unstable();
        b.dedup();
        TvRule { head, body: b, guard }
    }
}

impl fmt::Display for TvRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :- ", self.head)?;
        for (i, l) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        if self.body.is_empty() {
            write!(f, ": {}.", self.guard)
        } else {
            write!(f, " : {}.", self.guard)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TvProgram {
    n: u32,
    rules: Vec<TvRule>,
}

impl TvProgram {
    pub fn new(n: u32, rules: Vec<TvRule>) -> Self {
        TvProgram { n, rules }
    }

    pub fn signature_size(&self) -> u32 {
        self.n
    }

    pub fn rules(&self) -> &[TvRule] {
        &self.rules
    }

    /// Rule count, duplicates included.
    pub fn size(&self) -> usize {
        self.rules.len()
    }
}

impl fmt::Display for TvProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#vars {}.", self.n)?;
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// The reduct: the literal rules whose guards `interp` satisfies.
pub fn tv_reduct<'p>(p: &'p TvProgram, interp: &Interpretation) -> Vec<&'p TvRule> {
    p.rules.iter().filter(|r| r.guard.eval(interp)).collect()
}

/// Least literal set closed under the reduct rules.
fn minimal_closure(rules: &[&TvRule]) -> BTreeSet<Literal> {
    let mut closed: BTreeSet<Literal> = BTreeSet::new();
    loop {
        let mut changed = false;
        for rule in rules {
            if !closed.contains(&rule.head) && rule.body.iter().all(|l| closed.contains(l)) {
                closed.insert(rule.head);
                changed = true;
            }
        }
        if !changed {
            return closed;
        }
    }
}

/// All models by exhaustive enumeration.
pub fn tv_models(
    p: &TvProgram,
    id: impl Into<String>,
    cap: u32,
) -> Result<AnswerSetReport, SolveError> {
    let n = p.signature_size();
    crate::semantics::ensure_enumerable(n, cap)?;
    let sets = Interpretation::all(n)
        .filter(|i| {
            let closure = minimal_closure(&tv_reduct(p, i));
            literals_pin_unique_model(&closure, n, i)
        })
        .collect();
    Ok(AnswerSetReport::new(id.into(), n, sets))
}

/// The `#false :- B : G` shorthand: two clashing rules on `x1`; callers
/// must have at least one signature variable.
fn bot_expansion(body: Vec<Literal>, guard: PropFormula) -> [TvRule; 2] {
    [
        TvRule::new(Literal::Pos(Var(1)), body.clone(), guard.clone()),
        TvRule::new(Literal::Neg(Var(1)), body, guard),
    ]
}

/// Rewrites a causal theory rule by rule: `H <= G` becomes `H :- : G`,
/// with `#false` heads expanded. The rule count matches unless the theory
/// has `#false` heads, each of which becomes two rules.
pub fn dt_to_tv(d: &CausalTheory) -> TvProgram {
    let mut rules = Vec::new();
    for r in d.rules() {
        match &r.head {
            DtHead::Lit(l) => rules.push(TvRule::new(*l, [], r.body.clone())),
            DtHead::Bot => {
                assert!(
                    d.signature_size() >= 1,
                    "expanding a #false head needs at least one signature variable"
                );
                rules.extend(bot_expansion(Vec::new(), r.body.clone()));
            }
        }
    }
    TvProgram::new(d.signature_size(), rules)
}

/// Rewrites a canonical program: bare body atoms stay as literal premises,
/// negated elements move into the guard (`not y` as `!y`, `not not z` as
/// `z`), and every signature variable gets a default `-x :- : -x` rule.
pub fn cp_to_tv(p: &Program) -> TvProgram {
    let n = p.signature_size();
    let mut rules = Vec::new();
    for r in p.iter() {
        let premises: Vec<Literal> = r
            .body
            .vars()
            .into_iter()
            .map(Literal::Pos)
            .collect();
        let guard = PropFormula::and(
            r.body
                .iter()
                .filter_map(|e| match e {
                    RuleElement::Atom(_) => None,
                    RuleElement::Top => Some(PropFormula::Top),
                    RuleElement::Bot => Some(PropFormula::Bot),
                    RuleElement::Not(v) => Some(PropFormula::not(PropFormula::Var(v))),
                    RuleElement::NotNot(v) => Some(PropFormula::Var(v)),
                })
                .collect(),
        );
        match r.head {
            Head::Atom(v) => rules.push(TvRule::new(Literal::Pos(v), premises, guard)),
            Head::Bot => {
                assert!(
                    n >= 1,
                    "expanding a #false head needs at least one signature variable"
                );
                rules.extend(bot_expansion(premises, guard));
            }
        }
    }
    for i in 1..=n {
        rules.push(TvRule::new(
            Literal::Neg(Var(i)),
            [],
            PropFormula::not(PropFormula::Var(Var(i))),
        ));
    }
    TvProgram::new(n, rules)
}

/// Rewrites a formula over `x1..xn`: a pair of self-supporting rules per
/// variable plus the expanded `#false :- : !f`, so `2n + 2` rules.
pub fn pf_to_tv(f: &PropFormula, n: u32) -> TvProgram {
    assert!(n >= 1, "the clash-pair expansion needs at least one signature variable");
    assert!(f.max_var() <= n, "formula mentions a variable outside x1..x{n}");
    let mut rules = Vec::new();
    for i in 1..=n {
        let v = Var(i);
        rules.push(TvRule::new(Literal::Pos(v), [], PropFormula::Var(v)));
        rules.push(TvRule::new(Literal::Neg(v), [], PropFormula::not(PropFormula::Var(v))));
    }
    rules.extend(bot_expansion(Vec::new(), PropFormula::not(f.clone())));
    TvProgram::new(n, rules)
}

/// Parses the text form; same header conventions as the other formalisms.
pub fn parse_tv(text: &str) -> Result<TvProgram, ParseError> {
    let mut s = Scanner::new(text);
    let mut header: Option<u32> = None;
    let mut raw: Vec<(TvHeadText, Vec<Literal>, PropFormula)> = Vec::new();
    let mut max_var = 0u32;

    while !s.at_end() {
        let (line, col) = s.position();
        let head = parse_tv_head(&mut s, &mut max_var)?;
        if let TvHeadText::Header = head {
            if header.is_some() || !raw.is_empty() {
                return Err(ParseError {
                    line,
                    col,
                    message: "`#vars` header must come first and only once".into(),
                });
            }
            header = Some(s.integer().ok_or_else(|| s.error("expected variable count"))??);
            s.expect('.')?;
            continue;
        }
        let mut body = Vec::new();
        let mut guard = PropFormula::Top;
        if !s.eat('.') {
            if !s.eat_str(":-") {
                return Err(s.error("expected `.` or `:-` after rule head"));
            }
            if !s.eat(':') {
                loop {
                    body.push(parse_tv_literal(&mut s, &mut max_var)?);
                    if !s.eat(',') {
                        break;
                    }
                }
                if s.eat(':') {
                    guard = formula::parse_at(&mut s, 1)?;
                    max_var = max_var.max(guard.max_var());
                }
            } else {
                guard = formula::parse_at(&mut s, 1)?;
                max_var = max_var.max(guard.max_var());
            }
            s.expect('.')?;
        }
        raw.push((head, body, guard));
    }

    let n = header.unwrap_or(max_var);
    let mut rules = Vec::new();
    for (head, body, guard) in raw {
        match head {
            TvHeadText::Lit(l) => rules.push(TvRule::new(l, body, guard)),
            TvHeadText::Bot => rules.extend(bot_expansion(body, guard)),
            TvHeadText::Header => unreachable!(),
        }
    }
    for r in &rules {
        let m = r
            .body
            .iter()
            .map(|l| l.var().0)
            .chain([r.head.var().0, r.guard.max_var()])
            .max()
            .unwrap();
        if m > n {
            return Err(ParseError {
                line: 0,
                col: 0,
                message: format!("atom x{m} exceeds the declared signature of {n} variables"),
            });
        }
    }
    Ok(TvProgram::new(n, rules))
}

enum TvHeadText {
    Lit(Literal),
    Bot,
    Header,
}

fn parse_tv_head(s: &mut Scanner, max_var: &mut u32) -> Result<TvHeadText, ParseError> {
    if s.eat('-') {
        let name = s.ident().ok_or_else(|| s.error("expected a variable after `-`"))?;
        return Ok(TvHeadText::Lit(Literal::Neg(tv_var(s, &name, max_var)?)));
    }
    let tok = s.ident().ok_or_else(|| s.error("expected a rule"))?;
    match tok.as_str() {
        "#vars" => Ok(TvHeadText::Header),
        "#false" => Ok(TvHeadText::Bot),
        name => Ok(TvHeadText::Lit(Literal::Pos(tv_var(s, name, max_var)?))),
    }
}

fn parse_tv_literal(s: &mut Scanner, max_var: &mut u32) -> Result<Literal, ParseError> {
    if s.eat('-') {
        let name = s.ident().ok_or_else(|| s.error("expected a variable after `-`"))?;
        return Ok(Literal::Neg(tv_var(s, &name, max_var)?));
    }
    let name = s.ident().ok_or_else(|| s.error("expected a literal"))?;
    Ok(Literal::Pos(tv_var(s, &name, max_var)?))
}

fn tv_var(s: &mut Scanner, name: &str, max_var: &mut u32) -> Result<Var, ParseError> {
    match formula::variable_of(name) {
        Some(v) => {
            *max_var = (*max_var).max(v.0);
            Ok(v)
        }
        None => Err(s.error(format!("expected a variable of the form x<i>, found `{name}`"))),
    }
}
