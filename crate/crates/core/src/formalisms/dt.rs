//! Definite causal theories: rules `H <= G` with a literal or `#false`
//! head and an arbitrary formula body.
//!
//! An interpretation `I` is a model when the heads of the rules whose
//! bodies `I` satisfies form a literal set with `I` as its unique model:
//! no `#false` head fired, the literals are consistent, they mention every
//! signature variable, and `I` satisfies them.
//!
//! Text form: `x1 <= x1 & -x2.`, `-x1 <= #true.`, `#false <= !(x1 | x2).`

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{self, PropFormula};
use crate::parse::ParseError;
use crate::program::{Interpretation, Var};
use crate::scan::Scanner;
use crate::semantics::{AnswerSetReport, SolveError};

use super::{literals_pin_unique_model, Literal};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DtHead {
    Lit(Literal),
    Bot,
}

impl fmt::Display for DtHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DtHead::Lit(l) => write!(f, "{l}"),
            DtHead::Bot => write!(f, "#false"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DtRule {
    pub head: DtHead,
    pub body: PropFormula,
}

impl fmt::Display for DtRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}.", self.head, self.body)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CausalTheory {
    n: u32,
    rules: Vec<DtRule>,
}

impl CausalTheory {
    pub fn new(n: u32, rules: Vec<DtRule>) -> Self {
        CausalTheory { n, rules }
    }

    pub fn signature_size(&self) -> u32 {
        self.n
    }

    pub fn rules(&self) -> &[DtRule] {
        &self.rules
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Simple theories have bodies that are conjunctions of literals.
    pub fn is_simple(&self) -> bool {
        fn literal(f: &PropFormula) -> bool {
            matches!(f, PropFormula::Var(_))
                || matches!(f, PropFormula::Not(inner) if matches!(inner.as_ref(), PropFormula::Var(_)))
        }
        self.rules.iter().all(|r| {
            literal(&r.body)
                || matches!(&r.body, PropFormula::And(fs) if fs.iter().all(literal))
        })
    }

    /// Rule count for simple theories, connective count otherwise.
    pub fn size(&self) -> usize {
        if self.is_simple() {
            self.rule_count()
        } else {
            self.rules
                .iter()
                .map(|r| {
                    let head = match &r.head {
                        DtHead::Lit(Literal::Neg(_)) | DtHead::Bot => 1,
                        DtHead::Lit(Literal::Pos(_)) => 0,
                    };
                    head + r.body.size()
                })
                .sum()
        }
    }
}

impl fmt::Display for CausalTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#vars {}.", self.n)?;
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// The reduct: the heads of all rules whose bodies `interp` satisfies.
pub fn dt_reduct(d: &CausalTheory, interp: &Interpretation) -> BTreeSet<DtHeadOrd> {
    d.rules
        .iter()
        .filter(|r| r.body.eval(interp))
        .map(|r| match &r.head {
            DtHead::Bot => DtHeadOrd::Bot,
            DtHead::Lit(l) => DtHeadOrd::Lit(*l),
        })
        .collect()
}

/// Ordered twin of [`DtHead`] so reducts can live in sets.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum DtHeadOrd {
    Lit(Literal),
    Bot,
}

/// All models by exhaustive enumeration.
pub fn dt_models(
    d: &CausalTheory,
    id: impl Into<String>,
    cap: u32,
) -> Result<AnswerSetReport, SolveError> {
    let n = d.signature_size();
    crate::semantics::ensure_enumerable(n, cap)?;
    let sets = Interpretation::all(n)
        .filter(|i| {
            let reduct = dt_reduct(d, i);
            if reduct.contains(&DtHeadOrd::Bot) {
                return false;
            }
            let literals: BTreeSet<Literal> = reduct
                .into_iter()
                .map(|h| match h {
                    DtHeadOrd::Lit(l) => l,
                    DtHeadOrd::Bot => unreachable!(),
                })
                .collect();
            literals_pin_unique_model(&literals, n, i)
        })
        .collect();
    Ok(AnswerSetReport::new(id.into(), n, sets))
}

/// Parses the text form; same header conventions as the other formalisms.
pub fn parse_dt(text: &str) -> Result<CausalTheory, ParseError> {
    let mut s = Scanner::new(text);
    let mut header: Option<u32> = None;
    let mut rules = Vec::new();
    let mut max_var = 0u32;

    while !s.at_end() {
        let (line, col) = s.position();
        if s.eat('-') {
            let name = s.ident().ok_or_else(|| s.error("expected a variable after `-`"))?;
            let v = head_var(&name, &mut s, &mut max_var)?;
            rules.push(parse_dt_tail(&mut s, DtHead::Lit(Literal::Neg(v)), &mut max_var)?);
            continue;
        }
        let tok = s.ident().ok_or_else(|| s.error("expected a rule"))?;
        match tok.as_str() {
            "#vars" => {
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
            }
            "#false" => {
                rules.push(parse_dt_tail(&mut s, DtHead::Bot, &mut max_var)?);
            }
            name => {
                let v = head_var(name, &mut s, &mut max_var)?;
                rules.push(parse_dt_tail(&mut s, DtHead::Lit(Literal::Pos(v)), &mut max_var)?);
            }
        }
    }
    let n = header.unwrap_or(max_var);
    for r in &rules {
        let head_max = match &r.head {
            DtHead::Lit(l) => l.var().0,
            DtHead::Bot => 0,
        };
        let m = head_max.max(r.body.max_var());
        if m > n {
            return Err(ParseError {
                line: 0,
                col: 0,
                message: format!("atom x{m} exceeds the declared signature of {n} variables"),
            });
        }
    }
    Ok(CausalTheory::new(n, rules))
}

fn head_var(name: &str, s: &mut Scanner, max_var: &mut u32) -> Result<Var, ParseError> {
    match formula::variable_of(name) {
        Some(v) => {
            *max_var = (*max_var).max(v.0);
            Ok(v)
        }
        None => Err(s.error(format!("expected a variable of the form x<i>, found `{name}`"))),
    }
}

fn parse_dt_tail(s: &mut Scanner, head: DtHead, max_var: &mut u32) -> Result<DtRule, ParseError> {
    if !s.eat_str("<=") {
        return Err(s.error("expected `<=` after rule head"));
    }
    let body = formula::parse_at(s, 1)?;
    *max_var = (*max_var).max(body.max_var());
    s.expect('.')?;
    Ok(DtRule { head, body })
}
