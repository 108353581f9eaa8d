//! Syntax of canonical programs: rule elements, rules, programs, and
//! bitstring interpretations, together with the satisfaction relation and
//! the body coverage/consistency analytics used by the simplifier.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

/// A propositional variable, identified by its 1-based index in the
/// program signature `x1..xn`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// One element of a rule body.
///
/// The derived ordering (kind first, then variable index) is the canonical
/// body order used everywhere for rendering and comparison.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RuleElement {
    /// `#true`
    Top,
    /// `#false`
    Bot,
    /// A bare variable `x`.
    Atom(Var),
    /// `not x`
    Not(Var),
    /// `not not x`
    NotNot(Var),
}

impl RuleElement {
    /// The variable this element constrains, if any.
    pub fn var(self) -> Option<Var> {
        match self {
            RuleElement::Top | RuleElement::Bot => None,
            RuleElement::Atom(v) | RuleElement::Not(v) | RuleElement::NotNot(v) => Some(v),
        }
    }
}

impl fmt::Display for RuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleElement::Top => write!(f, "#true"),
            RuleElement::Bot => write!(f, "#false"),
            RuleElement::Atom(v) => write!(f, "{v}"),
            RuleElement::Not(v) => write!(f, "not {v}"),
            RuleElement::NotNot(v) => write!(f, "not not {v}"),
        }
    }
}

/// A rule head: a variable or `#false`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Head {
    Bot,
    Atom(Var),
}

impl Head {
    pub fn var(self) -> Option<Var> {
        match self {
            Head::Bot => None,
            Head::Atom(v) => Some(v),
        }
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::Bot => write!(f, "#false"),
            Head::Atom(v) => write!(f, "{v}"),
        }
    }
}

/// A rule body: a set of rule elements kept sorted and deduplicated, so
/// that equal bodies compare equal and re-serialize identically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Body(Vec<RuleElement>);

impl Body {
    pub fn new(elements: impl IntoIterator<Item = RuleElement>) -> Self {
        let mut v: Vec<RuleElement> = elements.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Body(v)
    }

    pub fn empty() -> Self {
        Body(Vec::new())
    }

    pub fn iter(&self) -> impl Iterator<Item = RuleElement> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: RuleElement) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    /// The positively occurring variables of the body: bare atoms only,
    /// not the variables under `not` or `not not`.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.iter()
            .filter_map(|e| match e {
                RuleElement::Atom(v) => Some(v),
                _ => None,
            })
            .collect()
    }

    /// Whether the body covers `x`: one of `x`, `not x`, `not not x` occurs.
    pub fn covers(&self, x: Var) -> bool {
        self.contains(RuleElement::Atom(x))
            || self.contains(RuleElement::Not(x))
            || self.contains(RuleElement::NotNot(x))
    }

    /// Whether the body covers every variable of an n-variable signature.
    pub fn fully_covers(&self, n: u32) -> bool {
        (1..=n).all(|i| self.covers(Var(i)))
    }

    /// The body with one element removed (a no-op if absent).
    pub fn without(&self, e: RuleElement) -> Body {
        Body::new(self.iter().filter(|&x| x != e))
    }

    /// The body with every element rewritten; the result is re-canonicalized.
    pub fn map(&self, f: impl FnMut(RuleElement) -> RuleElement) -> Body {
        Body::new(self.iter().map(f))
    }
}

impl FromIterator<RuleElement> for Body {
    fn from_iter<T: IntoIterator<Item = RuleElement>>(iter: T) -> Self {
        Body::new(iter)
    }
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A canonical rule `H :- B.`
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rule {
    pub head: Head,
    pub body: Body,
}

impl Rule {
    pub fn new(head: Head, body: Body) -> Self {
        Rule { head, body }
    }

    /// A fact `x.`
    pub fn fact(v: Var) -> Self {
        Rule::new(Head::Atom(v), Body::empty())
    }

    /// A constraint `#false :- B.`
    pub fn constraint(body: Body) -> Self {
        Rule::new(Head::Bot, body)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body.is_empty() {
            write!(f, "{}.", self.head)
        } else {
            write!(f, "{} :- {}.", self.head, self.body)
        }
    }
}

/// A canonical program: an explicit signature size `n` and an ordered,
/// duplicate-free list of rules over `x1..xn`.
///
/// The signature may declare more variables than the rules mention; parity
/// checks and enumeration always range over the full declared signature.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Program {
    n: u32,
    rules: Vec<Rule>,
}

impl Program {
    /// Builds a program, deduplicating rules while preserving first
    /// appearance order.
    ///
    /// Panics if a rule mentions a variable outside `x1..xn`; the parser
    /// reports that case as a proper error before construction.
    pub fn new(n: u32, rules: impl IntoIterator<Item = Rule>) -> Self {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for rule in rules {
            for v in rule.head.var().into_iter().chain(rule.body.iter().filter_map(|e| e.var())) {
                assert!(
                    v.0 >= 1 && v.0 <= n,
                    "variable {v} out of range for signature of {n} variables"
                );
            }
            if seen.insert(rule.clone()) {
                out.push(rule);
            }
        }
        Program { n, rules: out }
    }

    pub fn empty(n: u32) -> Self {
        Program { n, rules: Vec::new() }
    }

    /// Keeps the rule list exactly as given, duplicates included. The
    /// reduct uses this: it maps rules one to one and must not shrink.
    pub(crate) fn from_rules_verbatim(n: u32, rules: Vec<Rule>) -> Self {
        Program { n, rules }
    }

    /// Number of signature variables.
    pub fn signature_size(&self) -> u32 {
        self.n
    }

    /// Program size: the number of rules.
    pub fn size(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter()
    }

    /// Whether the program is normal: no `not not` anywhere.
    pub fn is_normal(&self) -> bool {
        self.iter()
            .all(|r| !r.body.iter().any(|e| matches!(e, RuleElement::NotNot(_))))
    }

    /// Whether the program is basic: bodies contain only `#true`, `#false`
    /// and bare atoms.
    pub fn is_basic(&self) -> bool {
        self.iter().all(|r| {
            r.body
                .iter()
                .all(|e| matches!(e, RuleElement::Top | RuleElement::Bot | RuleElement::Atom(_)))
        })
    }

    /// The rules as a set, for order-insensitive comparison.
    pub fn rule_set(&self) -> BTreeSet<Rule> {
        self.rules.iter().cloned().collect()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#vars {}.", self.n)?;
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// An interpretation over `x1..xn` as a fixed-width bitstring; the textual
/// form `w1 w2 ... wn` puts `x1` leftmost, so `1010` stands for `{x1, x3}`.
///
/// Ordering is lexicographic on the textual form.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Interpretation {
    n: u32,
    bits: u64,
}

impl Interpretation {
    pub const MAX_VARS: u32 = 64;

    pub fn empty(n: u32) -> Self {
        assert!(n <= Self::MAX_VARS, "interpretation width {n} exceeds {}", Self::MAX_VARS);
        Interpretation { n, bits: 0 }
    }

    /// Builds from a raw mask where bit `i-1` is the membership of `x_i`.
    pub fn from_bits(n: u32, bits: u64) -> Self {
        let mut i = Self::empty(n);
        i.bits = if n == 64 { bits } else { bits & ((1u64 << n) - 1) };
        i
    }

    pub fn from_vars(n: u32, vars: impl IntoIterator<Item = Var>) -> Self {
        let mut i = Self::empty(n);
        for v in vars {
            i.set(v, true);
        }
        i
    }

    /// Parses a bitstring like `1010`.
    pub fn parse(text: &str) -> Option<Self> {
        if text.len() > Self::MAX_VARS as usize {
            return None;
        }
        let mut bits = 0u64;
        for (idx, ch) in text.chars().enumerate() {
            match ch {
                '1' => bits |= 1u64 << idx,
                '0' => {}
                _ => return None,
            }
        }
        Some(Interpretation { n: text.len() as u32, bits })
    }

    pub fn width(&self) -> u32 {
        self.n
    }

    pub fn contains(&self, v: Var) -> bool {
        debug_assert!(v.0 >= 1 && v.0 <= self.n);
        self.bits >> (v.0 - 1) & 1 == 1
    }

    pub fn set(&mut self, v: Var, value: bool) {
        assert!(v.0 >= 1 && v.0 <= self.n);
        if value {
            self.bits |= 1u64 << (v.0 - 1);
        } else {
            self.bits &= !(1u64 << (v.0 - 1));
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (1..=self.n).map(Var).filter(|&v| self.contains(v))
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Number of 1-bits modulo 2.
    pub fn parity(&self) -> u32 {
        self.bits.count_ones() % 2
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == 1
    }

    /// Set inclusion as variable sets (widths must agree).
    pub fn is_subset_of(&self, other: &Interpretation) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.bits & !other.bits == 0
    }

    /// All 2^n interpretations over an n-variable signature, in mask order.
    pub fn all(n: u32) -> impl Iterator<Item = Interpretation> {
        assert!(n < 64, "cannot enumerate 2^{n} interpretations");
        (0..1u64 << n).map(move |bits| Interpretation { n, bits })
    }

    /// Satisfaction of a single rule element.
    pub fn satisfies(&self, e: RuleElement) -> bool {
        match e {
            RuleElement::Top => true,
            RuleElement::Bot => false,
            RuleElement::Atom(v) | RuleElement::NotNot(v) => self.contains(v),
            RuleElement::Not(v) => !self.contains(v),
        }
    }

    /// A body is satisfied iff every element is.
    pub fn satisfies_body(&self, body: &Body) -> bool {
        body.iter().all(|e| self.satisfies(e))
    }

    /// Satisfaction of a head (`#false` is never satisfied).
    pub fn satisfies_head(&self, head: Head) -> bool {
        match head {
            Head::Bot => false,
            Head::Atom(v) => self.contains(v),
        }
    }

    fn lex_key(&self) -> u64 {
        if self.n == 0 {
            0
        } else {
            self.bits.reverse_bits() >> (64 - self.n)
        }
    }
}

impl PartialOrd for Interpretation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interpretation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            write!(f, "{}", if self.contains(Var(i)) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serializes as the bitstring text, e.g. `"1010"`.
impl Serialize for Interpretation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// All odd-weight interpretations of width `n`, in lexicographic order.
pub fn odd_strings(n: u32) -> Vec<Interpretation> {
    let mut out: Vec<Interpretation> = Interpretation::all(n).filter(|i| i.is_odd()).collect();
    out.sort();
    out
}

/// Coverage and consistency profile of a rule body over an n-variable
/// signature.
///
/// `sat_count` is the exact number of interpretations satisfying the body,
/// computed symbolically: a consistent body leaves each uncovered variable
/// free, so the count is `2^(n - |covered|)`; an inconsistent body has
/// count zero. `unique_string` is present exactly when the count is one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BodyProfile {
    pub covered: BTreeSet<Var>,
    pub consistent: bool,
    pub sat_count: u128,
    pub unique_string: Option<Interpretation>,
}

/// Profiles a body against an n-variable signature.
///
/// Inconsistency is syntactic: the body contains `#false`, or both `x` and
/// `not x`, or both `not x` and `not not x` for some variable. Because each
/// element constrains a single variable independently, this coincides with
/// the semantic definition (no satisfying interpretation).
pub fn body_profile(body: &Body, n: u32) -> BodyProfile {
    let covered: BTreeSet<Var> = body.iter().filter_map(|e| e.var()).collect();
    assert!(
        covered.iter().all(|v| v.0 >= 1 && v.0 <= n),
        "body mentions a variable outside x1..x{n}"
    );
    let consistent = !body.contains(RuleElement::Bot)
        && covered.iter().all(|&v| {
            let pos = body.contains(RuleElement::Atom(v));
            let neg = body.contains(RuleElement::Not(v));
            let dn = body.contains(RuleElement::NotNot(v));
            !(pos && neg) && !(neg && dn)
        });
    let sat_count = if consistent {
        1u128 << (n as usize - covered.len())
    } else {
        0
    };
    let unique_string = if sat_count == 1 {
        let forced = (1..=n).map(Var).filter(|&v| {
            body.contains(RuleElement::Atom(v)) || body.contains(RuleElement::NotNot(v))
        });
        Some(Interpretation::from_vars(n, forced))
    } else {
        None
    };
    BodyProfile { covered, consistent, sat_count, unique_string }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute;

    fn body(elements: &[RuleElement]) -> Body {
        Body::new(elements.iter().copied())
    }

    #[test]
    fn body_vars_picks_bare_atoms_only() {
        // var({x1, not x2, not not x3}) = {x1}
        let b = body(&[
            RuleElement::Atom(Var(1)),
            RuleElement::Not(Var(2)),
            RuleElement::NotNot(Var(3)),
        ]);
        assert_eq!(b.vars(), BTreeSet::from([Var(1)]));
        assert_eq!(Body::empty().vars(), BTreeSet::new());
        let negs = body(&[RuleElement::Not(Var(1)), RuleElement::NotNot(Var(2))]);
        assert_eq!(negs.vars(), BTreeSet::new());
    }

    #[test]
    fn coverage_per_definition() {
        let b = body(&[
            RuleElement::Atom(Var(1)),
            RuleElement::Not(Var(2)),
            RuleElement::NotNot(Var(3)),
        ]);
        assert!(b.fully_covers(3));
        assert!(!Body::empty().fully_covers(1));
        // Coverage ignores consistency.
        let clash = body(&[RuleElement::Atom(Var(1)), RuleElement::Not(Var(1))]);
        assert!(clash.fully_covers(1));
    }

    #[test]
    fn satisfaction_table() {
        let i = Interpretation::from_vars(1, [Var(1)]);
        assert!(i.satisfies(RuleElement::NotNot(Var(1))));
        assert!(i.satisfies(RuleElement::Atom(Var(1))));
        assert!(i.satisfies(RuleElement::Top));
        assert!(!i.satisfies(RuleElement::Bot));
        let empty = Interpretation::empty(2);
        assert!(empty.satisfies_body(&body(&[RuleElement::Not(Var(1)), RuleElement::Not(Var(2))])));
    }

    #[test]
    fn profile_example_two_strings() {
        // B = {x2, not x3, not not x4} over four variables: S(B) = {1101, 0101}.
        let b = body(&[
            RuleElement::Atom(Var(2)),
            RuleElement::Not(Var(3)),
            RuleElement::NotNot(Var(4)),
        ]);
        let p = body_profile(&b, 4);
        assert!(p.consistent);
        assert_eq!(p.sat_count, 2);
        assert_eq!(p.unique_string, None);
        let strings: Vec<String> =
            brute::satisfying_set(&b, 4).iter().map(|i| i.to_string()).collect();
        assert_eq!(strings, ["0101", "1101"]);
    }

    #[test]
    fn profile_inconsistent_bodies() {
        for b in [
            body(&[RuleElement::Atom(Var(1)), RuleElement::Not(Var(1))]),
            body(&[RuleElement::Not(Var(1)), RuleElement::NotNot(Var(1))]),
            body(&[RuleElement::Bot]),
        ] {
            let p = body_profile(&b, 2);
            assert!(!p.consistent);
            assert_eq!(p.sat_count, 0);
            assert!(brute::satisfying_set(&b, 2).is_empty());
        }
        // x together with not not x is consistent.
        let b = body(&[RuleElement::Atom(Var(1)), RuleElement::NotNot(Var(1))]);
        assert!(body_profile(&b, 1).consistent);
    }

    #[test]
    fn profile_unique_string() {
        let b = body(&[RuleElement::Not(Var(1)), RuleElement::NotNot(Var(2))]);
        let p = body_profile(&b, 2);
        assert_eq!(p.sat_count, 1);
        let unique = p.unique_string.expect("fully covered consistent body");
        assert_eq!(unique.to_string(), "01");
        assert_eq!(brute::satisfying_set(&b, 2), vec![unique]);
    }

    #[test]
    fn interpretation_text_orientation() {
        let i = Interpretation::parse("1010").unwrap();
        assert!(i.contains(Var(1)));
        assert!(!i.contains(Var(2)));
        assert!(i.contains(Var(3)));
        assert!(!i.contains(Var(4)));
        assert_eq!(i.to_string(), "1010");
        assert_eq!(i.parity(), 0);
        assert!(Interpretation::parse("01").unwrap().is_odd());
    }

    #[test]
    fn interpretation_order_is_lexicographic() {
        let mut all: Vec<Interpretation> = Interpretation::all(3).collect();
        all.sort();
        let texts: Vec<String> = all.iter().map(|i| i.to_string()).collect();
        assert_eq!(texts, ["000", "001", "010", "011", "100", "101", "110", "111"]);
    }

    #[test]
    fn programs_deduplicate_rules() {
        let r = Rule::fact(Var(1));
        let p = Program::new(1, [r.clone(), r.clone()]);
        assert_eq!(p.size(), 1);
    }

    #[test]
    fn odd_strings_count() {
        assert_eq!(odd_strings(4).len(), 8);
        assert!(odd_strings(4).iter().all(|i| i.is_odd()));
    }
}
