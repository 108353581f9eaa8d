//! Parameterized parity encoders for every supported formalism, with
//! closed-form size predictions alongside the constructions.
//!
//! All generated artifacts are byte-reproducible: body enumeration is
//! lexicographic, the balanced xor tree splits deterministically.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formalisms::cc::{CardConstraint, CcHead, CcProgram, CcRule};
use crate::formalisms::dt::{CausalTheory, DtHead, DtRule};
use crate::formalisms::tv::{pf_to_tv, TvProgram};
use crate::formalisms::Literal;
use crate::formula::PropFormula;
use crate::program::{Body, Head, Program, Rule, RuleElement, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("parity instances need at least one variable")]
    ZeroVariables,
    #[error(
        "normal programs cannot compute odd strings beyond two variables: \
         their answer sets form an anti-chain, but both 100 and 111 would be needed"
    )]
    NormalProgramRefused { n: u32 },
}

/// The supported target formalisms.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Formalism {
    /// Canonical programs.
    Cp,
    /// Normal programs (only the two smallest instances exist).
    Lp,
    /// Cardinality constraints and choice rules.
    Cc,
    /// Definite causal theories.
    Dt,
    /// Two-valued programs.
    Tv,
    /// Propositional formulas.
    Pf,
}

impl Formalism {
    pub const ALL: [Formalism; 6] = [
        Formalism::Cp,
        Formalism::Lp,
        Formalism::Cc,
        Formalism::Dt,
        Formalism::Tv,
        Formalism::Pf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Formalism::Cp => "cp",
            Formalism::Lp => "lp",
            Formalism::Cc => "cc",
            Formalism::Dt => "dt",
            Formalism::Tv => "tv",
            Formalism::Pf => "pf",
        }
    }
}

impl fmt::Display for Formalism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formalism {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cp" => Ok(Formalism::Cp),
            "lp" => Ok(Formalism::Lp),
            "cc" => Ok(Formalism::Cc),
            "dt" => Ok(Formalism::Dt),
            "tv" => Ok(Formalism::Tv),
            "pf" => Ok(Formalism::Pf),
            other => Err(format!("unknown formalism `{other}` (expected cp|lp|cc|dt|tv|pf)")),
        }
    }
}

/// The canonical-program parity encoder: generator rules
/// `x_i :- not not x_i` for `i < n` leave the first `n-1` bits free, and
/// one rule per even string of length `n-1` pins the last bit so the total
/// comes out odd. Size `(n-1) + 2^(n-2)` for `n >= 2`; the one-variable
/// instance is the single fact.
pub fn parity_cp(n: u32) -> Result<Program, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroVariables);
    }
    if n == 1 {
        return Ok(Program::new(1, [Rule::fact(Var(1))]));
    }
    let mut rules = Vec::new();
    for i in 1..n {
        rules.push(Rule::new(
            Head::Atom(Var(i)),
            Body::new([RuleElement::NotNot(Var(i))]),
        ));
    }
    // Even strings w over x1..x_{n-1} in lexicographic order; the body
    // asserts the string bit by bit.
    for w in 0..(1u64 << (n - 1)) {
        if w.count_ones() % 2 != 0 {
            continue;
        }
        let body = Body::new((1..n).map(|i| {
            let bit = w >> (n - 1 - i) & 1 == 1;
            if bit {
                RuleElement::Atom(Var(i))
            } else {
                RuleElement::Not(Var(i))
            }
        }));
        rules.push(Rule::new(Head::Atom(Var(n)), body));
    }
    Ok(Program::new(n, rules))
}

/// Normal-program parity encoders exist only for one and two variables;
/// larger instances are refused because answer sets of normal programs
/// form an anti-chain.
pub fn parity_lp(n: u32) -> Result<Program, GenerateError> {
    match n {
        0 => Err(GenerateError::ZeroVariables),
        1 => Ok(Program::new(1, [Rule::fact(Var(1))])),
        2 => Ok(Program::new(
            2,
            [
                Rule::new(Head::Atom(Var(1)), Body::new([RuleElement::Not(Var(2))])),
                Rule::new(Head::Atom(Var(2)), Body::new([RuleElement::Not(Var(1))])),
            ],
        )),
        _ => Err(GenerateError::NormalProgramRefused { n }),
    }
}

/// Choice over all variables plus one constraint per even count:
/// `#false :- k {x1; ...; xn} k` for even `k`, so `n/2 + 1` constraints.
pub fn parity_cc(n: u32) -> Result<CcProgram, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroVariables);
    }
    let all: Vec<Var> = (1..=n).map(Var).collect();
    let mut rules = vec![CcRule { head: CcHead::Choice(all.clone()), body: Vec::new() }];
    for k in (0..=n as usize).step_by(2) {
        let constraint =
            CardConstraint::new(k, k, all.iter().map(|&v| Literal::Pos(v))).expect("k <= n");
        rules.push(CcRule {
            head: CcHead::Bot,
            body: vec![crate::formalisms::cc::CcElement::Card(constraint)],
        });
    }
    Ok(CcProgram::new(n, rules))
}

/// Literal self-support pairs plus one constraint body: the negated parity
/// formula.
pub fn parity_dt(n: u32) -> Result<CausalTheory, GenerateError> {
    let formula = parity_pf(n)?;
    let mut rules = Vec::new();
    for i in 1..=n {
        let v = Var(i);
        rules.push(DtRule { head: DtHead::Lit(Literal::Pos(v)), body: PropFormula::Var(v) });
        rules.push(DtRule {
            head: DtHead::Lit(Literal::Neg(v)),
            body: PropFormula::not(PropFormula::Var(v)),
        });
    }
    rules.push(DtRule { head: DtHead::Bot, body: PropFormula::not(formula) });
    Ok(CausalTheory::new(n, rules))
}

/// A balanced xor tree over `x1..xn`, each xor expanded as
/// `(a & !b) | (!a & b)`; quadratically many connectives because each
/// expansion duplicates its subtrees.
pub fn parity_pf(n: u32) -> Result<PropFormula, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroVariables);
    }
    fn xor_range(lo: u32, hi: u32) -> PropFormula {
        if lo == hi {
            return PropFormula::Var(Var(lo));
        }
        let mid = lo + (hi - lo) / 2;
        let a = xor_range(lo, mid);
        let b = xor_range(mid + 1, hi);
        PropFormula::or(vec![
            PropFormula::and(vec![a.clone(), PropFormula::not(b.clone())]),
            PropFormula::and(vec![PropFormula::not(a), b]),
        ])
    }
    Ok(xor_range(1, n))
}

/// The two-valued encoder: the formula encoder pushed through `pf_to_tv`.
pub fn parity_tv(n: u32) -> Result<TvProgram, GenerateError> {
    Ok(pf_to_tv(&parity_pf(n)?, n))
}

/// Closed-form size predictions, one per formalism. For cardinality
/// programs this is the constraint count; rule counts add the one choice
/// rule.
pub fn predicted_size(f: Formalism, n: u32) -> Option<usize> {
    if n == 0 {
        return None;
    }
    match f {
        Formalism::Cp => Some(if n == 1 { 1 } else { (n as usize - 1) + (1 << (n - 2)) }),
        Formalism::Lp => (n <= 2).then_some(n as usize),
        Formalism::Cc => Some(n as usize / 2 + 1),
        // One variable: every body is a literal, so the theory is simple
        // and counts rules. Otherwise: n literal pairs (two negations
        // each), then the constraint rule with its #false head and the
        // negation wrapped around the formula.
        Formalism::Dt => Some(if n == 1 { 3 } else { 2 * n as usize + 2 + predicted_pf_size(n) }),
        Formalism::Tv => Some(2 * n as usize + 2),
        Formalism::Pf => Some(predicted_pf_size(n)),
    }
}

/// Connective count of the balanced xor tree: each expansion adds five
/// gates over duplicated halves.
fn predicted_pf_size(n: u32) -> usize {
    if n == 1 {
        return 0;
    }
    let mid = 1 + (n - 1) / 2;
    2 * predicted_pf_size(mid) + 2 * predicted_pf_size(n - mid) + 5
}

/// A generated instance with its measured and predicted sizes. The two
/// always agree; the pair exists so reports can show the arithmetic.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub formalism: Formalism,
    pub n: u32,
    pub artifact: Artifact,
    pub size: usize,
    pub predicted_size: usize,
}

#[derive(Clone, Debug)]
pub enum Artifact {
    Cp(Program),
    Lp(Program),
    Cc(CcProgram),
    Dt(CausalTheory),
    Tv(TvProgram),
    Pf(PropFormula),
}

impl Artifact {
    /// Canonical text form of the artifact.
    pub fn render(&self) -> String {
        match self {
            Artifact::Cp(p) | Artifact::Lp(p) => p.to_string(),
            Artifact::Cc(p) => p.to_string(),
            Artifact::Dt(d) => d.to_string(),
            Artifact::Tv(p) => p.to_string(),
            Artifact::Pf(f) => format!("{f}\n"),
        }
    }
}

/// Generates the parity instance for a formalism, measuring its size and
/// checking the closed form.
pub fn generate(f: Formalism, n: u32) -> Result<GeneratedInstance, GenerateError> {
    let (artifact, size) = match f {
        Formalism::Cp => {
            let p = parity_cp(n)?;
            let size = p.size();
            (Artifact::Cp(p), size)
        }
        Formalism::Lp => {
            let p = parity_lp(n)?;
            let size = p.size();
            (Artifact::Lp(p), size)
        }
        Formalism::Cc => {
            let p = parity_cc(n)?;
            let size = p.constraint_count();
            (Artifact::Cc(p), size)
        }
        Formalism::Dt => {
            let d = parity_dt(n)?;
            let size = d.size();
            (Artifact::Dt(d), size)
        }
        Formalism::Tv => {
            let p = parity_tv(n)?;
            let size = p.size();
            (Artifact::Tv(p), size)
        }
        Formalism::Pf => {
            let f = parity_pf(n)?;
            let size = f.size();
            (Artifact::Pf(f), size)
        }
    };
    let predicted_size = predicted_size(f, n).expect("construction succeeded");
    assert_eq!(size, predicted_size, "size formula drifted for {f} at n={n}");
    Ok(GeneratedInstance { formalism: f, n, artifact, size, predicted_size })
}

/// One row of the size comparison table.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SizeRow {
    pub n: u32,
    pub cp_rules: usize,
    /// Rule count of the normal-program encoder, where one exists.
    pub lp_rules: Option<usize>,
    pub cc_rules: usize,
    pub cc_constraints: usize,
    pub dt_size: usize,
    pub tv_rules: usize,
    pub pf_size: usize,
}

/// Measured sizes of every encoder for `n = 1..=n_max`. Everything is
/// generated and counted; nothing is solved, so large `n` stay cheap.
pub fn size_table(n_max: u32) -> Vec<SizeRow> {
    (1..=n_max)
        .map(|n| {
            let cp = parity_cp(n).expect("n >= 1");
            let cc = parity_cc(n).expect("n >= 1");
            let dt = parity_dt(n).expect("n >= 1");
            let tv = parity_tv(n).expect("n >= 1");
            let pf = parity_pf(n).expect("n >= 1");
            SizeRow {
                n,
                cp_rules: cp.size(),
                lp_rules: parity_lp(n).ok().map(|p| p.size()),
                cc_rules: cc.size(),
                cc_constraints: cc.constraint_count(),
                dt_size: dt.size(),
                tv_rules: tv.size(),
                pf_size: pf.size(),
            }
        })
        .collect()
}
