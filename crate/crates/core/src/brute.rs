//! Brute-force reference enumerators.
//!
//! These are deliberately naive: they decide properties by walking the full
//! interpretation or subset space and nothing else. The symbolic routines
//! elsewhere in the crate are tested against them, so they must stay
//! independent of those implementations.

use std::collections::BTreeSet;

use crate::completion::{DependencyGraph, Loop};
use crate::program::{Body, Interpretation, Program, Var};

/// `S(B)`: every interpretation over `x1..xn` satisfying the body, in
/// lexicographic order, found by checking all 2^n candidates.
pub fn satisfying_set(body: &Body, n: u32) -> Vec<Interpretation> {
    let mut out: Vec<Interpretation> =
        Interpretation::all(n).filter(|i| i.satisfies_body(body)).collect();
    out.sort();
    out
}

/// Every loop of the graph, found by testing each nonempty variable subset
/// for strong connectivity (self-edge for singletons). Exponential; callers
/// keep `n` small.
pub fn loops_by_subsets(graph: &DependencyGraph) -> Vec<Loop> {
    let n = graph.var_count();
    assert!(n <= 16, "subset enumeration over {n} variables is not desk scale");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let vars: BTreeSet<Var> =
            (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).map(Var).collect();
        if is_strongly_connected(graph, &vars) {
            out.push(Loop::new(vars));
        }
    }
    out.sort();
    out
}

fn is_strongly_connected(graph: &DependencyGraph, vars: &BTreeSet<Var>) -> bool {
    if vars.len() == 1 {
        let v = *vars.iter().next().unwrap();
        return graph.has_edge(v, v);
    }
    let start = *vars.iter().next().unwrap();
    reaches_all(graph, vars, start, false) && reaches_all(graph, vars, start, true)
}

fn reaches_all(graph: &DependencyGraph, vars: &BTreeSet<Var>, start: Var, reversed: bool) -> bool {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in vars.iter() {
            let edge = if reversed { graph.has_edge(w, v) } else { graph.has_edge(v, w) };
            if edge && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == vars.len()
}

/// Whether the interpretation is closed under every rule: the head holds
/// whenever the body does.
pub fn is_closed_under(p: &Program, i: &Interpretation) -> bool {
    p.iter().all(|r| !i.satisfies_body(&r.body) || i.satisfies_head(r.head))
}
