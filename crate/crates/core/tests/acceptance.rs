//! End-to-end acceptance suite. Each test covers one guarantee the crate
//! makes, prints a `PASS <name> (<elapsed>)` line, and enforces both the
//! exact expected values and a generous wall-clock budget.
//!
//! Run with `cargo test -p cpkit-core --test acceptance -- --nocapture`
//! to see the lines.

use std::time::{Duration, Instant};

use cpkit_core::completion::{check_fages, completion, enumerate_loops, DEFAULT_LOOP_CAP};
use cpkit_core::formalisms::cc::cc_answer_sets;
use cpkit_core::formalisms::dt::dt_models;
use cpkit_core::formalisms::tv::{cp_to_tv, dt_to_tv, pf_to_tv, tv_models};
use cpkit_core::formula::{models, parse_formula};
use cpkit_core::generate::{
    self, parity_cc, parity_cp, parity_dt, parity_lp, parity_pf, parity_tv, size_table,
};
use cpkit_core::parse::parse_program;
use cpkit_core::program::{odd_strings, Interpretation, Program};
use cpkit_core::random::{random_formula, random_program, random_theory, ProgramShape, Rng};
use cpkit_core::semantics::{answer_sets, answer_sets_capped, DEFAULT_SOLVE_CAP};
use cpkit_core::simplify::{
    coverage_partition, drop_inconsistent_rules, drop_singleton_loop_rules, is_pure, is_standard,
    simplify_parity, standardize, to_almost_pure, to_pure, SimplifyOptions,
};

struct Criterion {
    name: &'static str,
    budget: Duration,
    started: Instant,
}

impl Criterion {
    fn start(name: &'static str, budget_secs: u64) -> Self {
        Criterion { name, budget: Duration::from_secs(budget_secs), started: Instant::now() }
    }

    fn finish(self) {
        let elapsed = self.started.elapsed();
        println!("PASS {} ({:.2?})", self.name, elapsed);
        assert!(
            elapsed < self.budget,
            "{} took {:.2?}, over its {:.2?} budget",
            self.name,
            elapsed,
            self.budget
        );
    }
}

fn texts(sets: &[Interpretation]) -> Vec<String> {
    sets.iter().map(|i| i.to_string()).collect()
}

fn parity3_program() -> Program {
    parse_program(
        "#vars 3.\nx1 :- not not x1.\nx2 :- not not x2.\nx3 :- not x1, not x2.\nx3 :- x1, x2.",
    )
    .unwrap()
}

fn choice_program() -> Program {
    parse_program("x1 :- not not x1.").unwrap()
}

fn singleton_loop_pair() -> Program {
    parse_program("#vars 2.\nx1 :- not x2.\nx2 :- not x1.\nx1 :- x1.\nx2 :- x2.").unwrap()
}

fn mutual_support_pair() -> Program {
    parse_program(
        "#vars 2.\nx1 :- not x2.\nx1 :- x2, not not x1.\nx2 :- not x1.\nx2 :- x1, not not x2.",
    )
    .unwrap()
}

#[test]
fn golden_examples() {
    let c = Criterion::start("golden_examples", 1);

    assert_eq!(texts(&answer_sets(&parity3_program()).unwrap()), ["001", "010", "100", "111"]);
    assert_eq!(texts(&answer_sets(&choice_program()).unwrap()), ["0", "1"]);

    let comp = completion(&singleton_loop_pair());
    assert_eq!(
        comp,
        vec![
            parse_formula("x1 <-> x1 | !x2").unwrap(),
            parse_formula("x2 <-> x2 | !x1").unwrap(),
        ]
    );
    let eleven = Interpretation::parse("11").unwrap();
    assert!(models(&comp, 2, DEFAULT_SOLVE_CAP).unwrap().contains(&eleven));
    assert!(!answer_sets(&singleton_loop_pair()).unwrap().contains(&eleven));

    let (simplified, _) =
        simplify_parity(&mutual_support_pair(), &SimplifyOptions::default()).unwrap();
    assert_eq!(
        simplified,
        parse_program("#vars 2.\nx1 :- not x2.\nx2 :- not x1.").unwrap()
    );

    c.finish();
}

#[test]
fn generator_models_match_odd_strings() {
    let c = Criterion::start("generator_models_match_odd_strings", 60);
    for n in 1..=12u32 {
        let odd = odd_strings(n);
        assert_eq!(
            answer_sets_capped(&parity_cp(n).unwrap(), 12).unwrap(),
            odd,
            "canonical program at n={n}"
        );
        assert_eq!(
            cc_answer_sets(&parity_cc(n).unwrap(), "cc", 12).unwrap().answer_sets,
            odd,
            "cardinality program at n={n}"
        );
        assert_eq!(
            dt_models(&parity_dt(n).unwrap(), "dt", 12).unwrap().answer_sets,
            odd,
            "causal theory at n={n}"
        );
        assert_eq!(
            tv_models(&parity_tv(n).unwrap(), "tv", 12).unwrap().answer_sets,
            odd,
            "two-valued program at n={n}"
        );
        assert_eq!(
            models(&[parity_pf(n).unwrap()], n, 12).unwrap(),
            odd,
            "formula at n={n}"
        );
    }
    c.finish();
}

#[test]
fn simplification_pipeline_end_to_end() {
    let c = Criterion::start("simplification_pipeline_end_to_end", 60);
    for n in 1..=10u32 {
        let input = parity_cp(n).unwrap();
        let reference = answer_sets(&input).unwrap();
        assert_eq!(reference, odd_strings(n));

        // The pipeline verifies per-pass preservation internally; walk the
        // passes explicitly as well so a regression names the pass.
        let after_consistent = drop_inconsistent_rules(&input);
        assert_eq!(answer_sets(&after_consistent).unwrap(), reference, "consistency pass n={n}");
        let after_singleton = drop_singleton_loop_rules(&after_consistent);
        assert_eq!(answer_sets(&after_singleton).unwrap(), reference, "singleton pass n={n}");
        let after_standard = standardize(&after_singleton);
        assert_eq!(answer_sets(&after_standard).unwrap(), reference, "standardize n={n}");
        let after_almost = to_almost_pure(&after_standard).unwrap();
        assert_eq!(answer_sets(&after_almost).unwrap(), reference, "almost-pure n={n}");
        let after_pure = to_pure(&after_almost).unwrap();
        assert_eq!(answer_sets(&after_pure).unwrap(), reference, "pure n={n}");

        let (output, trace) = simplify_parity(&input, &SimplifyOptions::default()).unwrap();
        assert!(output.size() <= input.size(), "size grew at n={n}");
        assert!(trace.passes.iter().all(|p| p.size_after <= p.size_before));
        assert!(enumerate_loops(&output, DEFAULT_LOOP_CAP).unwrap().is_empty());
        assert!(is_pure(&output));
        assert!(check_fages(&output, DEFAULT_SOLVE_CAP, DEFAULT_LOOP_CAP).unwrap());
        assert_eq!(answer_sets(&output).unwrap(), reference, "pipeline output n={n}");
    }
    c.finish();
}

#[test]
fn lin_zhao_on_seeded_random_programs() {
    let c = Criterion::start("lin_zhao_on_seeded_random_programs", 30);
    let mut rng = Rng::new(0x11a0_2840);
    for case in 0..500 {
        let n = rng.range_inclusive(1, 5) as u32;
        let p = random_program(&mut rng, &ProgramShape::canonical(n, 12));
        assert!(
            cpkit_core::completion::check_lin_zhao(&p, DEFAULT_SOLVE_CAP, DEFAULT_LOOP_CAP)
                .unwrap(),
            "case {case}:\n{p}"
        );
    }
    c.finish();
}

#[test]
fn singleton_loop_removal_on_seeded_random_programs() {
    let c = Criterion::start("singleton_loop_removal_on_seeded_random_programs", 30);
    let mut rng = Rng::new(0x51e6_1e70);
    for case in 0..1000 {
        let n = rng.range_inclusive(1, 5) as u32;
        let p = random_program(&mut rng, &ProgramShape::canonical(n, 12));
        let q = drop_singleton_loop_rules(&p);
        assert_eq!(
            answer_sets(&p).unwrap(),
            answer_sets(&q).unwrap(),
            "case {case}:\n{p}"
        );
    }
    c.finish();
}

#[test]
fn antichain_on_seeded_random_normal_programs() {
    let c = Criterion::start("antichain_on_seeded_random_normal_programs", 30);
    let mut rng = Rng::new(0xa271_c4a1);
    for case in 0..1000 {
        let n = rng.range_inclusive(1, 5) as u32;
        let p = random_program(&mut rng, &ProgramShape::normal(n, 12));
        let report =
            cpkit_core::semantics::answer_set_report(&p, "antichain", DEFAULT_SOLVE_CAP).unwrap();
        assert!(report.is_antichain(), "case {case}:\n{p}");
    }
    for n in 3..=6 {
        assert!(parity_lp(n).is_err(), "normal encoder must refuse n={n}");
    }
    c.finish();
}

#[test]
fn size_growth_formulas() {
    let c = Criterion::start("size_growth_formulas", 5);
    let table = size_table(16);
    let mut dt_fit: f64 = 0.0;
    let mut pf_fit: f64 = 0.0;
    for row in &table {
        let n = row.n as usize;
        let expected_cp = if n == 1 { 1 } else { (n - 1) + (1 << (n - 2)) };
        assert_eq!(row.cp_rules, expected_cp, "cp at n={n}");
        assert_eq!(row.cc_constraints, n / 2 + 1, "cc at n={n}");
        let square = (n * n) as f64;
        dt_fit = dt_fit.max(row.dt_size as f64 / square);
        pf_fit = pf_fit.max(row.pf_size as f64 / square);
        assert!(row.dt_size <= 5 * n * n, "dt at n={n}: {}", row.dt_size);
        assert!(row.pf_size <= 2 * n * n, "pf at n={n}: {}", row.pf_size);
    }
    println!("  fitted constants: dt <= {dt_fit:.3} n^2, pf <= {pf_fit:.3} n^2");
    c.finish();
}

#[test]
fn translation_soundness_on_seeded_random_instances() {
    let c = Criterion::start("translation_soundness_on_seeded_random_instances", 30);

    let mut rng = Rng::new(0x7aa5_1a7e);
    for case in 0..500 {
        let n = rng.range_inclusive(1, 4) as u32;
        let p = random_program(&mut rng, &ProgramShape::canonical(n, 10));
        let translated = cp_to_tv(&p);
        assert_eq!(
            answer_sets(&p).unwrap(),
            tv_models(&translated, "cp-tv", DEFAULT_SOLVE_CAP).unwrap().answer_sets,
            "canonical case {case}:\n{p}"
        );
    }

    let mut rng = Rng::new(0xd7_2740);
    for case in 0..500 {
        let n = rng.range_inclusive(1, 4) as u32;
        let d = random_theory(&mut rng, n, 10);
        let translated = dt_to_tv(&d);
        assert_eq!(
            dt_models(&d, "dt", DEFAULT_SOLVE_CAP).unwrap().answer_sets,
            tv_models(&translated, "dt-tv", DEFAULT_SOLVE_CAP).unwrap().answer_sets,
            "theory case {case}:\n{d}"
        );
    }

    let mut rng = Rng::new(0xf0_2740);
    for case in 0..500 {
        let n = rng.range_inclusive(1, 4) as u32;
        let f = random_formula(&mut rng, n, 3);
        let translated = pf_to_tv(&f, n);
        assert_eq!(
            models(std::slice::from_ref(&f), n, DEFAULT_SOLVE_CAP).unwrap(),
            tv_models(&translated, "pf-tv", DEFAULT_SOLVE_CAP).unwrap().answer_sets,
            "formula case {case}: {f}"
        );
    }

    c.finish();
}

#[test]
fn coverage_facts_hold_on_every_standard_instance() {
    let c = Criterion::start("coverage_facts_hold_on_every_standard_instance", 30);
    // Generated encoders for every size the model checks cover.
    for n in 1..=12u32 {
        let p = parity_cp(n).unwrap();
        assert!(is_standard(&p));
        coverage_partition(&p).unwrap_or_else(|violation| {
            panic!("coverage fact falsified on generated instance n={n}: {violation}")
        });
    }
    // Pipeline intermediates: every standardized stage and its purified
    // successors.
    for n in 1..=10u32 {
        let input = parity_cp(n).unwrap();
        let standard = standardize(&drop_singleton_loop_rules(&drop_inconsistent_rules(&input)));
        for (stage_name, stage) in [
            ("standardized", standard.clone()),
            ("almost-pure", to_almost_pure(&standard).unwrap()),
            ("pure", to_pure(&to_almost_pure(&standard).unwrap()).unwrap()),
        ] {
            coverage_partition(&stage).unwrap_or_else(|violation| {
                panic!("coverage fact falsified on {stage_name} stage n={n}: {violation}")
            });
        }
        // The mutual-support pattern exercises the deletion branch.
        let (out, _) = simplify_parity(&input, &SimplifyOptions::default()).unwrap();
        coverage_partition(&out).unwrap();
    }
    let standard_pair = standardize(&mutual_support_pair());
    coverage_partition(&standard_pair).unwrap();
    c.finish();
}

#[test]
fn generated_instances_report_matching_sizes() {
    let c = Criterion::start("generated_instances_report_matching_sizes", 30);
    for n in 1..=20u32 {
        for f in generate::Formalism::ALL {
            if f == generate::Formalism::Lp && n > 2 {
                continue;
            }
            let inst = generate::generate(f, n).unwrap();
            assert_eq!(inst.size, inst.predicted_size, "{f} n={n}");
        }
    }
    c.finish();
}
