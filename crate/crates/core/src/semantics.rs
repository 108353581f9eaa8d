//! Answer set semantics: reduct, least fixpoint, answer set checking and
//! exhaustive enumeration, plus the anti-chain and parity representation
//! checks built on the enumerator.

use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::program::{odd_strings, Body, Head, Interpretation, Program, Rule, RuleElement, Var};

/// Default cap on the signature size for exhaustive enumeration.
pub const DEFAULT_SOLVE_CAP: u32 = 20;

/// Hard ceiling on enumeration width regardless of the configured cap;
/// interpretations are 64-bit masks.
pub const ENUMERATION_CEILING: u32 = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("signature of {n} variables exceeds the enumeration cap of {cap}")]
    CapExceeded { n: u32, cap: u32 },
}

/// Refuses signatures beyond the cap (or the absolute ceiling) before any
/// enumeration starts.
pub fn ensure_enumerable(n: u32, cap: u32) -> Result<(), SolveError> {
    let effective = cap.min(ENUMERATION_CEILING);
    if n > effective {
        return Err(SolveError::CapExceeded { n, cap: effective });
    }
    Ok(())
}

/// A program whose bodies contain only `#true`, `#false` and bare atoms.
/// Such a program has exactly one answer set (unless `#false` is derived).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BasicProgram {
    inner: Program,
}

impl BasicProgram {
    /// Validates that the program contains no negation.
    pub fn try_new(p: Program) -> Result<Self, Program> {
        if p.is_basic() {
            Ok(BasicProgram { inner: p })
        } else {
            Err(p)
        }
    }

    pub fn as_program(&self) -> &Program {
        &self.inner
    }

    pub fn size(&self) -> usize {
        self.inner.size()
    }

    /// The least fixpoint of the one-step consequence operator, starting
    /// from the empty set. Each round evaluates every body against the
    /// previous round's result.
    pub fn least_model(&self) -> FixpointResult {
        let mut atoms = Interpretation::empty(self.inner.signature_size());
        let mut bot_derived = false;
        let mut rounds = 0;
        loop {
            let snapshot = atoms;
            let mut changed = false;
            for rule in self.inner.iter() {
                if !snapshot.satisfies_body(&rule.body) {
                    continue;
                }
                match rule.head {
                    Head::Bot => {
                        if !bot_derived {
                            bot_derived = true;
                            changed = true;
                        }
                    }
                    Head::Atom(v) => {
                        if !snapshot.contains(v) {
                            atoms.set(v, true);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
            rounds += 1;
        }
        FixpointResult { atoms, bot_derived, rounds }
    }
}

/// Outcome of the least fixpoint computation. A derived `#false` is a
/// flagged outcome, not an error.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FixpointResult {
    pub atoms: Interpretation,
    pub bot_derived: bool,
    /// Productive evaluation rounds: how often one application of the
    /// consequence operator grew the set. At most n + 1.
    pub rounds: usize,
}

impl Program {
    /// The reduct with respect to `interp`: every `not not x` becomes
    /// `#true` when `x` holds and `#false` otherwise, every `not x` the
    /// opposite. The result is basic and has the same number of rules.
    pub fn reduct(&self, interp: &Interpretation) -> BasicProgram {
        let rules = self.iter().map(|r| {
            let body = r.body.map(|e| match e {
                RuleElement::NotNot(v) => {
                    if interp.contains(v) {
                        RuleElement::Top
                    } else {
                        RuleElement::Bot
                    }
                }
                RuleElement::Not(v) => {
                    if interp.contains(v) {
                        RuleElement::Bot
                    } else {
                        RuleElement::Top
                    }
                }
                keep => keep,
            });
            Rule::new(r.head, body)
        });
        // Verbatim: reduction is one to one, distinct rules may collapse
        // to equal basic rules but still count separately.
        BasicProgram { inner: Program::from_rules_verbatim(self.signature_size(), rules.collect()) }
    }
}

/// Whether `interp` is an answer set: the least model of the reduct equals
/// `interp` and `#false` was not derived.
pub fn is_answer_set(p: &Program, interp: &Interpretation) -> bool {
    let result = p.reduct(interp).least_model();
    !result.bot_derived && result.atoms == *interp
}

/// All answer sets of the program, in lexicographic order, by exhaustive
/// enumeration under the default cap.
pub fn answer_sets(p: &Program) -> Result<Vec<Interpretation>, SolveError> {
    answer_sets_capped(p, DEFAULT_SOLVE_CAP)
}

/// All answer sets with an explicit signature cap.
pub fn answer_sets_capped(p: &Program, cap: u32) -> Result<Vec<Interpretation>, SolveError> {
    let n = p.signature_size();
    ensure_enumerable(n, cap)?;
    let mut sets: Vec<Interpretation> =
        Interpretation::all(n).filter(|i| is_answer_set(p, i)).collect();
    sets.sort();
    Ok(sets)
}

/// An enumeration report: the answer sets of one program, sorted
/// lexicographically and duplicate-free.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AnswerSetReport {
    /// Caller-chosen identifier (file name, generator tag); not serialized.
    pub id: String,
    pub n: u32,
    pub answer_sets: Vec<Interpretation>,
}

impl AnswerSetReport {
    pub fn new(id: impl Into<String>, n: u32, answer_sets: Vec<Interpretation>) -> Self {
        let mut sets = answer_sets;
        sets.sort();
        sets.dedup();
        AnswerSetReport { id: id.into(), n, answer_sets: sets }
    }

    pub fn count(&self) -> usize {
        self.answer_sets.len()
    }

    /// No reported set strictly contains another. The sets are distinct by
    /// construction, so any inclusion between two of them is strict.
    pub fn is_antichain(&self) -> bool {
        let sets = &self.answer_sets;
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if a.is_subset_of(b) || b.is_subset_of(a) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the reported sets are exactly the odd strings of width `n`.
    pub fn matches_odd_strings(&self) -> bool {
        self.answer_sets == odd_strings(self.n)
    }
}

/// JSON form: `{"n": n, "answer_sets": ["..."], "count": k}`.
impl Serialize for AnswerSetReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AnswerSetReport", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("answer_sets", &self.answer_sets)?;
        s.serialize_field("count", &self.count())?;
        s.end()
    }
}

impl fmt::Display for AnswerSetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} answer set(s):", self.count())?;
        for i in &self.answer_sets {
            write!(f, " {i}")?;
        }
        Ok(())
    }
}

/// Enumerates and packages the answer sets of a program.
pub fn answer_set_report(
    p: &Program,
    id: impl Into<String>,
    cap: u32,
) -> Result<AnswerSetReport, SolveError> {
    Ok(AnswerSetReport::new(id.into(), p.signature_size(), answer_sets_capped(p, cap)?))
}

/// Whether the program computes the odd strings of length `n`: every odd
/// string is an answer set and nothing else is.
pub fn represents_parity(p: &Program, n: u32) -> Result<bool, SolveError> {
    represents_parity_capped(p, n, DEFAULT_SOLVE_CAP)
}

pub fn represents_parity_capped(p: &Program, n: u32, cap: u32) -> Result<bool, SolveError> {
    if p.signature_size() != n {
        return Ok(false);
    }
    Ok(answer_sets_capped(p, cap)? == odd_strings(n))
}

/// Immediate consequences of `interp` under a basic program: the heads of
/// the rules whose bodies are satisfied. Exposed for monotonicity tests.
pub fn step(p: &BasicProgram, interp: &Interpretation) -> (Interpretation, bool) {
    let mut next = Interpretation::empty(p.as_program().signature_size());
    let mut bot = false;
    for rule in p.as_program().iter() {
        if interp.satisfies_body(&rule.body) {
            match rule.head {
                Head::Bot => bot = true,
                Head::Atom(v) => next.set(v, true),
            }
        }
    }
    (next, bot)
}

/// Convenience constructors used across the test suites.
pub fn rule(head: Head, body: impl IntoIterator<Item = RuleElement>) -> Rule {
    Rule::new(head, Body::new(body))
}

pub fn atom_rule(head: u32, body: impl IntoIterator<Item = RuleElement>) -> Rule {
    rule(Head::Atom(Var(head)), body)
}
