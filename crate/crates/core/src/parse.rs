//! Text parser and renderer for canonical programs.
//!
//! Grammar, one statement per `.`:
//!
//! ```text
//! program := header? rule*
//! header  := '#vars' INT '.'
//! rule    := HEAD ( ':-' E ( ',' E )* )? '.'
//! HEAD    := ATOM | '#false'
//! E       := 'not'* ATOM | '#true' | '#false'
//! ```
//!
//! Comments start with `%` and run to the end of the line. With a `#vars n.`
//! header, atoms must be written `x<i>` with `1 <= i <= n`. Without a
//! header, programs written entirely with `x<i>` atoms infer the signature
//! as the maximum index; otherwise identifiers are mapped to `x1, x2, ...`
//! in order of first appearance.
//!
//! Chains of `not` are normalized: an odd count is `not x`, an even count
//! of two or more is `not not x`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::program::{Body, Head, Program, Rule, RuleElement, Var};
use crate::scan::Scanner;

/// A parse failure with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

struct RawAtom {
    name: String,
    line: u32,
    col: u32,
}

enum RawHead {
    Bot,
    Atom(RawAtom),
}

enum RawElement {
    Top,
    Bot,
    Atom { atom: RawAtom, negations: u32 },
}

struct RawRule {
    head: RawHead,
    body: Vec<RawElement>,
}

/// Parses a canonical program from its text form.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut s = Scanner::new(text);
    let mut header: Option<u32> = None;
    let mut rules: Vec<RawRule> = Vec::new();

    while !s.at_end() {
        let (line, col) = s.position();
        let tok = s
            .ident()
            .ok_or_else(|| s.error("expected a rule or `#vars` header"))?;
        if tok == "#vars" {
            if header.is_some() {
                return Err(ParseError { line, col, message: "duplicate `#vars` header".into() });
            }
            if !rules.is_empty() {
                return Err(ParseError {
                    line,
                    col,
                    message: "`#vars` header must precede all rules".into(),
                });
            }
            let n = s
                .integer()
                .ok_or_else(|| s.error("expected variable count after `#vars`"))??;
            s.expect('.')?;
            header = Some(n);
            continue;
        }
        rules.push(parse_rule(&mut s, tok, line, col)?);
    }

    resolve(header, rules)
}

/// Renders a program in its canonical text form; [`parse_program`] maps it
/// back to an identical value.
pub fn render_program(p: &Program) -> String {
    p.to_string()
}

fn parse_rule(s: &mut Scanner, head_tok: String, line: u32, col: u32) -> Result<RawRule, ParseError> {
    let head = match head_tok.as_str() {
        "#false" => RawHead::Bot,
        "#true" => {
            return Err(ParseError { line, col, message: "`#true` cannot be a rule head".into() })
        }
        "not" => {
            return Err(ParseError {
                line,
                col,
                message: "negation cannot appear in a rule head".into(),
            })
        }
        _ => RawHead::Atom(RawAtom { name: head_tok, line, col }),
    };

    let mut body = Vec::new();
    if !s.eat('.') {
        if !s.eat_str(":-") {
            return Err(s.error("expected `.` or `:-` after rule head"));
        }
        loop {
            body.push(parse_element(s)?);
            if s.eat(',') {
                continue;
            }
            s.expect('.')?;
            break;
        }
    }
    Ok(RawRule { head, body })
}

fn parse_element(s: &mut Scanner) -> Result<RawElement, ParseError> {
    let mut negations = 0u32;
    loop {
        let (line, col) = s.position();
        let tok = s.ident().ok_or_else(|| s.error("expected a rule element"))?;
        match tok.as_str() {
            "not" => {
                negations += 1;
                continue;
            }
            "#true" | "#false" => {
                if negations > 0 {
                    return Err(ParseError {
                        line,
                        col,
                        message: "`not` applies to variables only".into(),
                    });
                }
                return Ok(if tok == "#true" { RawElement::Top } else { RawElement::Bot });
            }
            _ => {
                return Ok(RawElement::Atom {
                    atom: RawAtom { name: tok, line, col },
                    negations,
                });
            }
        }
    }
}

/// Interprets `x<i>` as an index reference.
fn index_form(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn resolve(header: Option<u32>, raw: Vec<RawRule>) -> Result<Program, ParseError> {
    let atoms: Vec<&RawAtom> = raw
        .iter()
        .flat_map(|r| {
            let head = match &r.head {
                RawHead::Atom(a) => Some(a),
                RawHead::Bot => None,
            };
            head.into_iter().chain(r.body.iter().filter_map(|e| match e {
                RawElement::Atom { atom, .. } => Some(atom),
                _ => None,
            }))
        })
        .collect();

    let indexed = atoms.iter().all(|a| index_form(&a.name).is_some());
    let mut names: BTreeMap<String, u32> = BTreeMap::new();
    let n;

    if let Some(declared) = header {
        for a in &atoms {
            let i = index_form(&a.name).ok_or_else(|| ParseError {
                line: a.line,
                col: a.col,
                message: format!(
                    "variable `{}` is not of the form x<i> required by the `#vars` header",
                    a.name
                ),
            })?;
            check_index(i, declared, a)?;
        }
        n = declared;
    } else if indexed {
        let mut max = 0;
        for a in &atoms {
            let i = index_form(&a.name).unwrap();
            check_index(i, u32::MAX, a)?;
            max = max.max(i);
        }
        n = max;
    } else {
        // Arbitrary identifiers: number them in first appearance order.
        for a in &atoms {
            let next = names.len() as u32 + 1;
            names.entry(a.name.clone()).or_insert(next);
        }
        n = names.len() as u32;
    }

    let var_of = |a: &RawAtom| -> Var {
        match names.get(&a.name) {
            Some(&i) => Var(i),
            None => Var(index_form(&a.name).unwrap()),
        }
    };

    let rules = raw.iter().map(|r| {
        let head = match &r.head {
            RawHead::Bot => Head::Bot,
            RawHead::Atom(a) => Head::Atom(var_of(a)),
        };
        let body = Body::new(r.body.iter().map(|e| match e {
            RawElement::Top => RuleElement::Top,
            RawElement::Bot => RuleElement::Bot,
            RawElement::Atom { atom, negations } => {
                let v = var_of(atom);
                match negations {
                    0 => RuleElement::Atom(v),
                    k if k % 2 == 1 => RuleElement::Not(v),
                    _ => RuleElement::NotNot(v),
                }
            }
        }));
        Rule::new(head, body)
    });
    Ok(Program::new(n, rules))
}

fn check_index(i: u32, n: u32, a: &RawAtom) -> Result<(), ParseError> {
    if i == 0 {
        return Err(ParseError {
            line: a.line,
            col: a.col,
            message: "atom index 0 is invalid; indices start at x1".into(),
        });
    }
    if i > n {
        return Err(ParseError {
            line: a.line,
            col: a.col,
            message: format!("atom x{i} exceeds the declared signature of {n} variables"),
        });
    }
    Ok(())
}
