//! The parity simplification pipeline: rewrites a parity program into an
//! equivalent, no-larger, loop-free (pure) one.
//!
//! Passes run in a fixed order, each establishing the precondition of the
//! next:
//!
//! 1. [`drop_inconsistent_rules`]: rules with unsatisfiable bodies are
//!    redundant for any program.
//! 2. [`drop_singleton_loop_rules`]: rules whose head recurs as a bare
//!    body atom never contribute to a least model; safe for any program.
//! 3. [`standardize`]: a rule `x :- B` carrying `not not x` whose body
//!    pins down a single interpretation is deleted (even string) or loses
//!    the `not not x` (odd string). Preserves answer sets of parity
//!    programs.
//! 4. [`to_almost_pure`]: in every full-coverage rule, bare body atoms
//!    become `not not` atoms.
//! 5. [`to_pure`]: the remaining below-coverage rules are rewritten the
//!    same way, leaving no bare body atoms and hence no loops.
//!
//! The pass functions are total on canonical programs, but the
//! answer-set-preservation guarantee needs the documented preconditions;
//! [`simplify_parity`] verifies them by brute force when the signature is
//! small enough and records a warning in the trace otherwise.

use serde::Serialize;
use thiserror::Error;

use crate::completion::{check_fages, enumerate_loops, LoopError, DEFAULT_LOOP_CAP};
use crate::program::{body_profile, Body, Head, Program, Rule, RuleElement};
use crate::semantics::{answer_sets_capped, SolveError};

/// Signature size up to which the pipeline verifies answer-set
/// preservation by default.
pub const DEFAULT_VERIFY_CAP: u32 = 10;

/// Removes every rule with an inconsistent body; such rules can never
/// fire, so answer sets are untouched for arbitrary programs.
pub fn drop_inconsistent_rules(p: &Program) -> Program {
    let n = p.signature_size();
    Program::new(n, p.iter().filter(|r| body_profile(&r.body, n).consistent).cloned())
}

/// Removes every rule whose head occurs as a bare atom in its own body.
/// Answer sets are preserved for arbitrary canonical programs: such a rule
/// can only fire after its head is already derived.
pub fn drop_singleton_loop_rules(p: &Program) -> Program {
    Program::new(
        p.signature_size(),
        p.iter()
            .filter(|r| match r.head {
                Head::Atom(h) => !r.body.vars().contains(&h),
                Head::Bot => true,
            })
            .cloned(),
    )
}

/// Rewrites rules `x :- B` with `not not x` in `B` whose body pins down a
/// unique interpretation: the rule is dropped when that interpretation is
/// even, and the `not not x` element is dropped when it is odd.
///
/// Preserves answer sets when the input is a parity program without
/// singleton loops or inconsistent bodies; run the earlier passes first.
pub fn standardize(p: &Program) -> Program {
    let n = p.signature_size();
    let rules = p.iter().filter_map(|r| {
        if let Head::Atom(h) = r.head {
            let marker = RuleElement::NotNot(h);
            if r.body.contains(marker) {
                let profile = body_profile(&r.body, n);
                if let Some(unique) = profile.unique_string {
                    if unique.is_odd() {
                        return Some(Rule::new(r.head, r.body.without(marker)));
                    }
                    return None;
                }
            }
        }
        Some(r.clone())
    });
    let out = Program::new(n, rules.collect::<Vec<_>>());
    debug_assert!(is_standard(&out));
    out
}

/// The definitional form of standardness: no rule carries `not not` on its
/// own head while body plus head pins down a unique interpretation.
/// [`standardize`] establishes this and asserts it on its output.
pub fn is_standard(p: &Program) -> bool {
    let n = p.signature_size();
    p.iter().all(|r| match r.head {
        Head::Bot => true,
        Head::Atom(h) => {
            if !r.body.contains(RuleElement::NotNot(h)) {
                return true;
            }
            let extended =
                Body::new(r.body.iter().chain(std::iter::once(RuleElement::Atom(h))));
            body_profile(&extended, n).sat_count != 1
        }
    })
}

/// Split of a standard parity program by body-plus-head coverage.
#[derive(Clone, Debug)]
pub struct CoveragePartition {
    /// Rules whose body together with the head leaves some signature
    /// variable uncovered. For standard parity programs these are exactly
    /// the rules carrying `not not` on their own head.
    pub partial: Vec<Rule>,
    /// Rules whose body plus head covers the whole signature: constraints
    /// and the value-determining rules.
    pub full: Vec<Rule>,
}

/// A structural fact about standard parity programs failed to hold; the
/// offending rule is reported. On a genuine parity input this is
/// unreachable, so a violation is a falsification signal, not a skip.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverageViolation {
    #[error("rule `{rule}` carries `not not` on its head but covers the signature")]
    DoubleNegationRuleCovers { rule: String },
    #[error("constraint `{rule}` has a consistent body that does not cover the signature")]
    ConstraintBelowCoverage { rule: String },
    #[error("rule `{rule}` contradicts its head but does not cover the signature")]
    SelfBlockingRuleBelowCoverage { rule: String },
    #[error("rule `{rule}` pins down the even interpretation {string}")]
    EvenUniqueString { rule: String, string: String },
}

/// How a rule's body-plus-head relates to the signature.
fn covers_with_head(rule: &Rule, n: u32) -> bool {
    (1..=n).all(|i| {
        let v = crate::program::Var(i);
        rule.body.covers(v) || rule.head == Head::Atom(v)
    })
}

/// Partitions a standard parity program by coverage and asserts the
/// structural facts the purification passes rely on:
///
/// * a rule with `not not` on its own head sits on the partial side;
/// * a consistent constraint, or a rule whose body contradicts its head,
///   sits on the full side;
/// * a full-side rule `x :- B` with consistent `B ∪ {x}` pins down an odd
///   interpretation.
pub fn coverage_partition(p: &Program) -> Result<CoveragePartition, CoverageViolation> {
    let n = p.signature_size();
    let mut partial = Vec::new();
    let mut full = Vec::new();
    for rule in p.iter() {
        let is_full = covers_with_head(rule, n);
        let profile = body_profile(&rule.body, n);
        if let Head::Atom(h) = rule.head {
            if rule.body.contains(RuleElement::NotNot(h)) && is_full && profile.consistent {
                return Err(CoverageViolation::DoubleNegationRuleCovers {
                    rule: rule.to_string(),
                });
            }
        }
        if profile.consistent && !is_full {
            match rule.head {
                Head::Bot => {
                    return Err(CoverageViolation::ConstraintBelowCoverage {
                        rule: rule.to_string(),
                    })
                }
                Head::Atom(h) => {
                    if rule.body.contains(RuleElement::Not(h)) {
                        return Err(CoverageViolation::SelfBlockingRuleBelowCoverage {
                            rule: rule.to_string(),
                        });
                    }
                }
            }
        }
        if is_full {
            if let Head::Atom(h) = rule.head {
                let head_extended = Body::new(
                    rule.body.iter().chain(std::iter::once(RuleElement::Atom(h))),
                );
                if let Some(unique) = body_profile(&head_extended, n).unique_string {
                    if !unique.is_odd() {
                        return Err(CoverageViolation::EvenUniqueString {
                            rule: rule.to_string(),
                            string: unique.to_string(),
                        });
                    }
                }
            }
            full.push(rule.clone());
        } else {
            partial.push(rule.clone());
        }
    }
    Ok(CoveragePartition { partial, full })
}

fn purify_body(body: &Body) -> Body {
    body.map(|e| match e {
        RuleElement::Atom(v) => RuleElement::NotNot(v),
        keep => keep,
    })
}

/// Rewrites every full-coverage rule so its body has no bare atoms,
/// replacing each `x` with `not not x`. Size never grows; answer sets are
/// preserved for standard parity programs.
pub fn to_almost_pure(p: &Program) -> Result<Program, CoverageViolation> {
    let partition = coverage_partition(p)?;
    let n = p.signature_size();
    let full: std::collections::BTreeSet<Rule> = partition.full.into_iter().collect();
    let rules = p.iter().map(|r| {
        if full.contains(r) {
            Rule::new(r.head, purify_body(&r.body))
        } else {
            r.clone()
        }
    });
    Ok(Program::new(n, rules))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PurityError {
    #[error("program is not almost pure: full-coverage rule `{rule}` has bare body atoms")]
    NotAlmostPure { rule: String },
    #[error(transparent)]
    Coverage(#[from] CoverageViolation),
}

/// Rewrites the remaining rules with bare body atoms, one at a time, into
/// their `not not` form. On an almost pure parity program the result is
/// pure: no bare body atoms anywhere, hence a loop-free program.
pub fn to_pure(p: &Program) -> Result<Program, PurityError> {
    let n = p.signature_size();
    for rule in p.iter() {
        if covers_with_head(rule, n) && !rule.body.vars().is_empty() {
            return Err(PurityError::NotAlmostPure { rule: rule.to_string() });
        }
    }
    // Rewriting rule by rule; each step keeps the program almost pure with
    // one fewer impure rule, so a single sweep reaches the fixpoint.
    let mut current = p.clone();
    loop {
        let target = current.iter().position(|r| !r.body.vars().is_empty());
        match target {
            None => return Ok(current),
            Some(idx) => {
                let rules = current.iter().enumerate().map(|(i, r)| {
                    if i == idx {
                        Rule::new(r.head, purify_body(&r.body))
                    } else {
                        r.clone()
                    }
                });
                current = Program::new(n, rules.collect::<Vec<_>>());
            }
        }
    }
}

/// Whether every rule body is free of bare atoms.
pub fn is_pure(p: &Program) -> bool {
    p.iter().all(|r| r.body.vars().is_empty())
}

/// One pipeline step as recorded in the trace.
#[derive(Clone, Debug, Serialize)]
pub struct PassRecord {
    pub pass: String,
    pub deleted: usize,
    pub rewritten: usize,
    pub size_before: usize,
    pub size_after: usize,
}

/// The full pipeline log: per-pass rule counts plus any warnings about
/// unverified preconditions. Sizes never increase across passes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PipelineTrace {
    pub passes: Vec<PassRecord>,
    pub warnings: Vec<String>,
    pub verified: bool,
}

impl PipelineTrace {
    fn record(&mut self, pass: &str, before: &Program, after: &Program) {
        let before_set = before.rule_set();
        let after_set = after.rule_set();
        let rewritten = after_set.difference(&before_set).count();
        let gone = before_set.difference(&after_set).count();
        self.passes.push(PassRecord {
            pass: pass.to_string(),
            deleted: gone.saturating_sub(rewritten),
            rewritten,
            size_before: before.size(),
            size_after: after.size(),
        });
    }
}

/// Verification policy for [`simplify_parity`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Verification {
    /// Verify when the signature is within [`DEFAULT_VERIFY_CAP`].
    #[default]
    Auto,
    On,
    Off,
}

#[derive(Clone, Debug)]
pub struct SimplifyOptions {
    pub verification: Verification,
    /// Signature cap for the brute-force equivalence oracle.
    pub solve_cap: u32,
    pub loop_cap: usize,
}

impl Default for SimplifyOptions {
    fn default() -> Self {
        SimplifyOptions {
            verification: Verification::Auto,
            solve_cap: DEFAULT_VERIFY_CAP,
            loop_cap: DEFAULT_LOOP_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplifyError {
    #[error("input does not compute the odd strings over its signature")]
    NotParity,
    #[error("pass `{pass}` changed the answer sets; this falsifies its correctness argument")]
    PassChangedAnswerSets { pass: String },
    #[error(transparent)]
    Coverage(#[from] CoverageViolation),
    #[error(transparent)]
    Purity(#[from] PurityError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Loops(#[from] LoopError),
}

/// Runs the whole pipeline on a parity program and returns the pure,
/// completion-equivalent result with its trace.
///
/// With verification on (the default for small signatures) the input is
/// first checked to compute the odd strings, every pass is checked to
/// preserve the answer sets exactly, and the output is checked loop-free
/// and completion-equivalent.
pub fn simplify_parity(
    p: &Program,
    opts: &SimplifyOptions,
) -> Result<(Program, PipelineTrace), SimplifyError> {
    let n = p.signature_size();
    let verify = match opts.verification {
        Verification::On => true,
        Verification::Off => false,
        Verification::Auto => n <= DEFAULT_VERIFY_CAP,
    };
    let mut trace = PipelineTrace { verified: verify, ..PipelineTrace::default() };
    if !verify {
        trace.warnings.push(format!(
            "verification skipped for signature of {n} variables; \
             answer-set preservation relies on the input computing the odd strings"
        ));
    }

    let reference = if verify {
        let ans = answer_sets_capped(p, opts.solve_cap)?;
        if ans != crate::program::odd_strings(n) {
            return Err(SimplifyError::NotParity);
        }
        Some(ans)
    } else {
        None
    };

    let mut current = p.clone();
    let run = |pass: &str,
                   f: &mut dyn FnMut(&Program) -> Result<Program, SimplifyError>,
                   current: &mut Program,
                   trace: &mut PipelineTrace|
     -> Result<(), SimplifyError> {
        let next = f(current)?;
        trace.record(pass, current, &next);
        if let Some(expected) = &reference {
            let got = answer_sets_capped(&next, opts.solve_cap)?;
            if &got != expected {
                return Err(SimplifyError::PassChangedAnswerSets { pass: pass.into() });
            }
        }
        *current = next;
        Ok(())
    };

    run("drop-inconsistent", &mut |p| Ok(drop_inconsistent_rules(p)), &mut current, &mut trace)?;
    run("drop-singleton-loops", &mut |p| Ok(drop_singleton_loop_rules(p)), &mut current, &mut trace)?;
    run("standardize", &mut |p| Ok(standardize(p)), &mut current, &mut trace)?;
    run("to-almost-pure", &mut |p| Ok(to_almost_pure(p)?), &mut current, &mut trace)?;
    run("to-pure", &mut |p| Ok(to_pure(p)?), &mut current, &mut trace)?;

    debug_assert!(current.size() <= p.size());
    if verify {
        if !enumerate_loops(&current, opts.loop_cap)?.is_empty() {
            return Err(SimplifyError::PassChangedAnswerSets { pass: "to-pure".into() });
        }
        if !check_fages(&current, opts.solve_cap, opts.loop_cap)? {
            return Err(SimplifyError::PassChangedAnswerSets { pass: "completion".into() });
        }
    }
    Ok((current, trace))
}
