//! Clark completion, the positive dependency graph, loop enumeration and
//! loop formulas, and the equivalence checks that bridge answer sets and
//! classical models.
//!
//! In completed formulas and loop formulas `not` is read as classical
//! negation and `not not x` flattens to `x`. Bodies are ordered canonically
//! wherever a disjunction is formed, so the output is independent of rule
//! order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{models, PropFormula};
use crate::program::{Body, Head, Program, RuleElement, Var};
use crate::semantics::{answer_sets_capped, SolveError};

/// Default cap on the number of enumerated loops.
pub const DEFAULT_LOOP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("more than {cap} loops; instance is beyond desk scale")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// The classical reading of a rule body: a conjunction of its elements with
/// `not` as `!` and `not not x` flattened to `x`.
pub fn body_formula(body: &Body) -> PropFormula {
    PropFormula::and(
        body.iter()
            .map(|e| match e {
                RuleElement::Top => PropFormula::Top,
                RuleElement::Bot => PropFormula::Bot,
                RuleElement::Atom(v) | RuleElement::NotNot(v) => PropFormula::Var(v),
                RuleElement::Not(v) => PropFormula::not(PropFormula::Var(v)),
            })
            .collect(),
    )
}

/// The completion of a program: one equivalence per signature variable
/// (`x <-> B1 | ... | Bm`, or `x <-> #false` for a headless variable) plus
/// one negated body per constraint rule.
pub fn completion(p: &Program) -> Vec<PropFormula> {
    let n = p.signature_size();
    let mut bodies_by_head: BTreeMap<Var, Vec<&Body>> = BTreeMap::new();
    for rule in p.iter() {
        if let Head::Atom(v) = rule.head {
            bodies_by_head.entry(v).or_default().push(&rule.body);
        }
    }
    let mut out = Vec::with_capacity(n as usize);
    for i in 1..=n {
        let v = Var(i);
        let mut bodies = bodies_by_head.remove(&v).unwrap_or_default();
        bodies.sort();
        bodies.dedup();
        out.push(PropFormula::iff(
            PropFormula::Var(v),
            PropFormula::or(bodies.into_iter().map(body_formula).collect()),
        ));
    }
    for rule in p.iter() {
        if rule.head == Head::Bot {
            out.push(PropFormula::not(body_formula(&rule.body)));
        }
    }
    out
}

/// The positive dependency graph: an edge `(x, x')` for every rule with
/// head `x` and `x'` occurring as a bare atom in the body. Elements under
/// `not` or `not not` contribute nothing.
#[derive(Clone, Debug)]
pub struct DependencyGraph {
    n: u32,
    edges: BTreeSet<(Var, Var)>,
}

impl DependencyGraph {
    pub fn var_count(&self) -> u32 {
        self.n
    }

    pub fn has_edge(&self, from: Var, to: Var) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Var, Var)> + '_ {
        self.edges.iter().copied()
    }

    fn successors(&self, from: Var) -> impl Iterator<Item = Var> + '_ {
        self.edges
            .range((from, Var(0))..=(from, Var(u32::MAX)))
            .map(|&(_, to)| to)
    }
}

pub fn dependency_graph(p: &Program) -> DependencyGraph {
    let mut edges = BTreeSet::new();
    for rule in p.iter() {
        if let Head::Atom(h) = rule.head {
            for v in rule.body.vars() {
                edges.insert((h, v));
            }
        }
    }
    DependencyGraph { n: p.signature_size(), edges }
}

/// A loop: a nonempty variable set whose induced subgraph is strongly
/// connected; singletons additionally need a self-edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Loop {
    vars: BTreeSet<Var>,
}

impl Loop {
    pub fn new(vars: BTreeSet<Var>) -> Self {
        assert!(!vars.is_empty(), "a loop is a nonempty set of variables");
        Loop { vars }
    }

    pub fn vars(&self) -> &BTreeSet<Var> {
        &self.vars
    }

    pub fn is_singleton(&self) -> bool {
        self.vars.len() == 1
    }

    pub fn contains(&self, v: Var) -> bool {
        self.vars.contains(&v)
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// All loops of the program's positive dependency graph, in canonical
/// order, found by recursive strongly-connected-component splitting: every
/// loop is an SCC of some induced subgraph obtained by deleting one vertex
/// at a time from a larger loop.
pub fn enumerate_loops(p: &Program, cap: usize) -> Result<Vec<Loop>, LoopError> {
    let graph = dependency_graph(p);
    let mut found: BTreeSet<BTreeSet<Var>> = BTreeSet::new();
    let all_vars: BTreeSet<Var> = (1..=graph.n).map(Var).collect();
    let mut pending: Vec<BTreeSet<Var>> = qualifying_sccs(&graph, &all_vars);

    while let Some(component) = pending.pop() {
        if !found.insert(component.clone()) {
            continue;
        }
        if found.len() > cap {
            return Err(LoopError::CapExceeded { cap });
        }
        if component.len() == 1 {
            continue;
        }
        for drop in &component {
            let mut rest = component.clone();
            rest.remove(drop);
            for sub in qualifying_sccs(&graph, &rest) {
                if !found.contains(&sub) {
                    pending.push(sub);
                }
            }
        }
    }
    Ok(found.into_iter().map(Loop::new).collect())
}

/// Strongly connected components of the induced subgraph that qualify as
/// loops: size two or more, or a singleton with a self-edge.
fn qualifying_sccs(graph: &DependencyGraph, within: &BTreeSet<Var>) -> Vec<BTreeSet<Var>> {
    tarjan_sccs(graph, within)
        .into_iter()
        .filter(|c| c.len() > 1 || c.iter().all(|&v| graph.has_edge(v, v)))
        .collect()
}

fn tarjan_sccs(graph: &DependencyGraph, within: &BTreeSet<Var>) -> Vec<BTreeSet<Var>> {
    struct State<'g> {
        graph: &'g DependencyGraph,
        within: &'g BTreeSet<Var>,
        index: BTreeMap<Var, usize>,
        low: BTreeMap<Var, usize>,
        on_stack: BTreeSet<Var>,
        stack: Vec<Var>,
        next: usize,
        sccs: Vec<BTreeSet<Var>>,
    }

    fn visit(st: &mut State, v: Var) {
        st.index.insert(v, st.next);
        st.low.insert(v, st.next);
        st.next += 1;
        st.stack.push(v);
        st.on_stack.insert(v);
        let succs: Vec<Var> =
            st.graph.successors(v).filter(|w| st.within.contains(w)).collect();
        for w in succs {
            if !st.index.contains_key(&w) {
                visit(st, w);
                let lw = st.low[&w];
                let lv = st.low.get_mut(&v).unwrap();
                *lv = (*lv).min(lw);
            } else if st.on_stack.contains(&w) {
                let iw = st.index[&w];
                let lv = st.low.get_mut(&v).unwrap();
                *lv = (*lv).min(iw);
            }
        }
        if st.low[&v] == st.index[&v] {
            let mut component = BTreeSet::new();
            while let Some(w) = st.stack.pop() {
                st.on_stack.remove(&w);
                component.insert(w);
                if w == v {
                    break;
                }
            }
            st.sccs.push(component);
        }
    }

    let mut st = State {
        graph,
        within,
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        on_stack: BTreeSet::new(),
        stack: Vec::new(),
        next: 0,
        sccs: Vec::new(),
    };
    for &v in within {
        if !st.index.contains_key(&v) {
            visit(&mut st, v);
        }
    }
    st.sccs
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0} is not a loop of the program")]
pub struct NotALoop(pub String);

/// The external support rules of a loop: head inside the loop, no bare
/// body atom inside the loop.
pub fn external_support<'p>(u: &Loop, p: &'p Program) -> Vec<&'p crate::program::Rule> {
    p.iter()
        .filter(|r| match r.head {
            Head::Atom(h) => u.contains(h) && !r.body.vars().iter().any(|v| u.contains(*v)),
            Head::Bot => false,
        })
        .collect()
}

/// The loop formula of `u`: if no external support body holds, everything
/// in the loop is false. An empty support set renders as `#false`, forcing
/// the whole loop false.
pub fn loop_formula(u: &Loop, p: &Program) -> Result<PropFormula, NotALoop> {
    let graph = dependency_graph(p);
    let ok = if u.is_singleton() {
        let v = *u.vars().iter().next().unwrap();
        graph.has_edge(v, v)
    } else {
        qualifying_sccs(&graph, u.vars()).iter().any(|c| c == u.vars())
    };
    if !ok {
        return Err(NotALoop(u.to_string()));
    }
    Ok(loop_formula_unchecked(u, p))
}

fn loop_formula_unchecked(u: &Loop, p: &Program) -> PropFormula {
    let mut bodies: Vec<&Body> = external_support(u, p).into_iter().map(|r| &r.body).collect();
    bodies.sort();
    bodies.dedup();
    let support = PropFormula::or(bodies.into_iter().map(body_formula).collect());
    let all_false =
        PropFormula::and(u.vars().iter().map(|&v| PropFormula::not(PropFormula::Var(v))).collect());
    PropFormula::implies(PropFormula::not(support), all_false)
}

/// The conjunction of the loop formulas of every loop; `#true` for a
/// loop-free program.
pub fn loop_formulas(p: &Program, cap: usize) -> Result<PropFormula, LoopError> {
    let loops = enumerate_loops(p, cap)?;
    Ok(PropFormula::and(loops.iter().map(|u| loop_formula_unchecked(u, p)).collect()))
}

/// Checks that the answer sets coincide with the models of completion plus
/// loop formulas.
pub fn check_lin_zhao(p: &Program, solve_cap: u32, loop_cap: usize) -> Result<bool, LoopError> {
    let ans = answer_sets_capped(p, solve_cap)?;
    let mut formulas = completion(p);
    formulas.push(loop_formulas(p, loop_cap)?);
    let m = models(&formulas, p.signature_size(), solve_cap)?;
    Ok(ans == m)
}

/// Checks that the program is loop-free and its answer sets coincide with
/// the models of its completion alone.
pub fn check_fages(p: &Program, solve_cap: u32, loop_cap: usize) -> Result<bool, LoopError> {
    if !enumerate_loops(p, loop_cap)?.is_empty() {
        return Ok(false);
    }
    let ans = answer_sets_capped(p, solve_cap)?;
    let m = models(&completion(p), p.signature_size(), solve_cap)?;
    Ok(ans == m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute;
    use crate::formula::parse_formula;
    use crate::parse::parse_program;
    use crate::program::Interpretation;
    use crate::semantics::DEFAULT_SOLVE_CAP;

    fn f(text: &str) -> PropFormula {
        parse_formula(text).unwrap()
    }

    fn program6() -> Program {
        parse_program("#vars 2.\nx1 :- not x2.\nx2 :- not x1.\nx1 :- x1.\nx2 :- x2.").unwrap()
    }

    fn program8() -> Program {
        parse_program(
            "#vars 2.\n\
             x1 :- not x2.\n\
             x1 :- x2, not not x1.\n\
             x2 :- not x1.\n\
             x2 :- x1, not not x2.",
        )
        .unwrap()
    }

    #[test]
    fn completion_of_singleton_loop_pair() {
        // Both variables keep their negative support and their self-rule.
        let comp = completion(&program6());
        assert_eq!(comp, vec![f("x1 <-> x1 | !x2"), f("x2 <-> x2 | !x1")]);
        // 11 is a model of the completion but not an answer set.
        let m = models(&comp, 2, DEFAULT_SOLVE_CAP).unwrap();
        assert!(m.contains(&Interpretation::parse("11").unwrap()));
        let ans = answer_sets_capped(&program6(), DEFAULT_SOLVE_CAP).unwrap();
        assert!(!ans.contains(&Interpretation::parse("11").unwrap()));
    }

    #[test]
    fn completion_headless_variable() {
        let p = Program::empty(1);
        assert_eq!(completion(&p), vec![f("x1 <-> #false")]);
    }

    #[test]
    fn completion_of_self_supporting_rule() {
        let p = parse_program("x1 :- x1.").unwrap();
        let m = models(&completion(&p), 1, DEFAULT_SOLVE_CAP).unwrap();
        assert_eq!(m.len(), 2);
        // The unique answer set is the empty one; Lin-Zhao repairs the gap.
        assert!(check_lin_zhao(&p, DEFAULT_SOLVE_CAP, DEFAULT_LOOP_CAP).unwrap());
    }

    #[test]
    fn completion_flattens_double_negation() {
        let p = parse_program("x1 :- not not x1.").unwrap();
        assert_eq!(completion(&p), vec![f("x1 <-> x1")]);
    }

    #[test]
    fn constraint_rules_become_negated_bodies() {
        let p = parse_program("#vars 2.\n#false :- x1, not x2.").unwrap();
        let comp = completion(&p);
        assert_eq!(comp[2], f("!(x1 & !x2)"));
    }

    #[test]
    fn dependency_edges_ignore_negated_elements() {
        let p = parse_program("#vars 3.\nx1 :- x2, not x3, not not x1.").unwrap();
        let g = dependency_graph(&p);
        assert!(g.has_edge(Var(1), Var(2)));
        assert!(!g.has_edge(Var(1), Var(3)));
        assert!(!g.has_edge(Var(1), Var(1)));
    }

    #[test]
    fn singleton_loops_of_self_rules() {
        let loops = enumerate_loops(&program6(), DEFAULT_LOOP_CAP).unwrap();
        let texts: Vec<String> = loops.iter().map(|u| u.to_string()).collect();
        assert_eq!(texts, ["{x1}", "{x2}"]);
        assert!(loops.iter().all(|u| u.is_singleton()));
    }

    #[test]
    fn non_singleton_loop_of_mutual_support() {
        let loops = enumerate_loops(&program8(), DEFAULT_LOOP_CAP).unwrap();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].vars(), &BTreeSet::from([Var(1), Var(2)]));
    }

    #[test]
    fn negative_programs_have_no_loops() {
        let p = parse_program("#vars 2.\nx1 :- not x2.\nx2 :- not not x2.").unwrap();
        assert!(enumerate_loops(&p, DEFAULT_LOOP_CAP).unwrap().is_empty());
    }

    #[test]
    fn loop_cap_is_an_error_not_truncation() {
        let p = parse_program("#vars 2.\nx1 :- x2.\nx2 :- x1.\nx1 :- x1.\nx2 :- x2.").unwrap();
        assert_eq!(enumerate_loops(&p, 100).unwrap().len(), 3);
        assert_eq!(enumerate_loops(&p, 2), Err(LoopError::CapExceeded { cap: 2 }));
    }

    #[test]
    fn loop_enumeration_matches_subset_oracle() {
        // Dense graph: x1 <-> x2 <-> x3 all interconnected plus a self-edge.
        let p = parse_program(
            "#vars 3.\nx1 :- x2.\nx2 :- x1.\nx2 :- x3.\nx3 :- x2.\nx1 :- x3.\nx3 :- x1.\nx1 :- x1.",
        )
        .unwrap();
        let fast = enumerate_loops(&p, DEFAULT_LOOP_CAP).unwrap();
        let slow = brute::loops_by_subsets(&dependency_graph(&p));
        assert_eq!(fast, slow);
        // {x1} singleton, three pairs, one triple.
        assert_eq!(fast.len(), 5);
    }

    #[test]
    fn unsupported_singleton_loop_forces_falsity() {
        let p = parse_program("x1 :- x1.").unwrap();
        let u = Loop::new(BTreeSet::from([Var(1)]));
        let lf = loop_formula(&u, &p).unwrap();
        assert_eq!(lf, f("!#false -> !x1"));
        let mut formulas = completion(&p);
        formulas.push(lf);
        let m = models(&formulas, 1, DEFAULT_SOLVE_CAP).unwrap();
        assert_eq!(m, vec![Interpretation::parse("0").unwrap()]);
    }

    #[test]
    fn loop_free_program_has_tautological_loop_formula() {
        let p = parse_program("#vars 2.\nx1 :- not x2.").unwrap();
        assert_eq!(loop_formulas(&p, DEFAULT_LOOP_CAP).unwrap(), PropFormula::Top);
    }

    #[test]
    fn loop_formula_of_mutual_support_truth_table() {
        let u = Loop::new(BTreeSet::from([Var(1), Var(2)]));
        let lf = loop_formula(&u, &program8()).unwrap();
        assert_eq!(lf, f("!(!x1 | !x2) -> !x1 & !x2"));
        let m = models(&[lf], 2, DEFAULT_SOLVE_CAP).unwrap();
        let texts: Vec<String> = m.iter().map(|i| i.to_string()).collect();
        assert_eq!(texts, ["00", "01", "10"]);
    }

    #[test]
    fn loop_formula_rejects_non_loops() {
        let p = parse_program("#vars 2.\nx1 :- x2.").unwrap();
        let u = Loop::new(BTreeSet::from([Var(1), Var(2)]));
        assert!(loop_formula(&u, &p).is_err());
    }

    #[test]
    fn lin_zhao_on_parity_three() {
        let p = parse_program(
            "#vars 3.\nx1 :- not not x1.\nx2 :- not not x2.\nx3 :- not x1, not x2.\nx3 :- x1, x2.",
        )
        .unwrap();
        assert!(check_lin_zhao(&p, DEFAULT_SOLVE_CAP, DEFAULT_LOOP_CAP).unwrap());
    }

    #[test]
    fn lin_zhao_on_singleton_loop_pair() {
        // Completion alone is wrong (11 sneaks in) but loop formulas fix it.
        assert!(check_lin_zhao(&program6(), DEFAULT_SOLVE_CAP, DEFAULT_LOOP_CAP).unwrap());
        assert!(!check_fages(&program6(), DEFAULT_SOLVE_CAP, DEFAULT_LOOP_CAP).unwrap());
    }

    #[test]
    fn fages_on_loop_free_program() {
        let p = parse_program("#vars 2.\nx1 :- not x2.\nx2 :- not x1.").unwrap();
        assert!(check_fages(&p, DEFAULT_SOLVE_CAP, DEFAULT_LOOP_CAP).unwrap());
    }

    #[test]
    fn completion_structural_bounds() {
        let p = program8();
        let total_elements: usize = p.iter().map(|r| r.body.len()).sum();
        let budget = 5 * (total_elements + p.signature_size() as usize);
        for formula in completion(&p) {
            assert!(formula.size() <= budget);
            assert!(formula.depth() <= 4);
        }
    }
}
