//! `cpkit`: solve, complete, simplify, generate, translate and check
//! canonical logic programs and their companion formalisms.
//!
//! Exit codes: 0 success, 1 a requested property does not hold (a JSON
//! counterexample goes to stdout), 2 usage or parse errors, 3 an
//! enumeration cap was exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cpkit_core::completion::{
    check_lin_zhao, completion, enumerate_loops, loop_formulas, LoopError, DEFAULT_LOOP_CAP,
};
use cpkit_core::formalisms::cc::{cc_answer_sets, parse_cc};
use cpkit_core::formalisms::dt::{dt_models, parse_dt};
use cpkit_core::formalisms::tv::{cp_to_tv, dt_to_tv, parse_tv, pf_to_tv, tv_models};
use cpkit_core::formula::{models, parse_formula, to_dimacs};
use cpkit_core::generate::{generate, size_table, Formalism};
use cpkit_core::parse::parse_program;
use cpkit_core::program::{odd_strings, Interpretation, Program};
use cpkit_core::random::{random_program, ProgramShape, Rng};
use cpkit_core::semantics::{answer_set_report, answer_sets_capped, SolveError, DEFAULT_SOLVE_CAP};
use cpkit_core::simplify::{simplify_parity, SimplifyError, SimplifyOptions, Verification};

#[derive(Parser)]
#[command(name = "cpkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum FormalismArg {
    Cp,
    Lp,
    Cc,
    Dt,
    Tv,
    Pf,
}

impl From<FormalismArg> for Formalism {
    fn from(f: FormalismArg) -> Formalism {
        match f {
            FormalismArg::Cp => Formalism::Cp,
            FormalismArg::Lp => Formalism::Lp,
            FormalismArg::Cc => Formalism::Cc,
            FormalismArg::Dt => Formalism::Dt,
            FormalismArg::Tv => Formalism::Tv,
            FormalismArg::Pf => Formalism::Pf,
        }
    }
}

/// Enumeration caps; flags override the environment, the environment
/// overrides the defaults.
#[derive(Args, Clone, Copy)]
struct Caps {
    /// Largest signature enumerated exhaustively (env: CPKIT_MAX_N).
    #[arg(long)]
    max_n: Option<u32>,
    /// Largest number of loops enumerated (env: CPKIT_MAX_LOOPS).
    #[arg(long)]
    max_loops: Option<usize>,
}

impl Caps {
    fn solve(&self) -> u32 {
        self.max_n
            .or_else(|| std::env::var("CPKIT_MAX_N").ok()?.parse().ok())
            .unwrap_or(DEFAULT_SOLVE_CAP)
    }

    fn loops(&self) -> usize {
        self.max_loops
            .or_else(|| std::env::var("CPKIT_MAX_LOOPS").ok()?.parse().ok())
            .unwrap_or(DEFAULT_LOOP_CAP)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the answer sets (or models) of a program.
    Solve {
        file: PathBuf,
        /// Input formalism; `pf` enumerates the models of a formula.
        #[arg(long, value_enum, default_value = "cp")]
        formalism: FormalismArg,
        #[command(flatten)]
        caps: Caps,
    },
    /// Print the completion of a canonical program.
    Complete {
        file: PathBuf,
        /// Export as DIMACS CNF; refused unless every formula is already
        /// clause-shaped.
        #[arg(long)]
        dimacs: bool,
    },
    /// List the loops of a canonical program.
    Loops {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Print the loop formulas of a canonical program.
    LoopFormulas {
        file: PathBuf,
        #[command(flatten)]
        caps: Caps,
    },
    /// Run the parity simplification pipeline; the program goes to stdout
    /// (or --out), the JSON trace to stderr.
    Simplify {
        file: PathBuf,
        /// Brute-force verification: auto verifies small signatures only.
        #[arg(long, value_enum, default_value = "auto")]
        verify: VerifyArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Emit a parity encoding in the chosen formalism.
    Generate {
        #[arg(long, value_enum)]
        formalism: FormalismArg,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a property of a program, or of seeded random programs.
    Check {
        #[arg(long, value_enum)]
        property: Property,
        /// Program file; required unless --random.
        file: Option<PathBuf>,
        /// Signature size the parity property refers to.
        #[arg(long)]
        n: Option<u32>,
        /// Check seeded random programs instead of a file.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Largest random signature (--random mode).
        #[arg(long, default_value_t = 5)]
        max_n: u32,
        /// Most rules per random program.
        #[arg(long, default_value_t = 12)]
        max_rules: usize,
    },
    /// Translate a program or formula into a two-valued program.
    Translate {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: TranslateTarget,
        #[arg(long, value_enum, default_value = "cp")]
        from: TranslateSource,
        /// Signature size for formula inputs; defaults to the largest
        /// index mentioned.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate parity encoding sizes per formalism.
    BenchSizes {
        #[arg(long, default_value_t = 16)]
        n_max: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum VerifyArg {
    Auto,
    On,
    Off,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Property {
    LinZhao,
    Fages,
    Antichain,
    Parity,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum TranslateTarget {
    Tv,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum TranslateSource {
    Cp,
    Dt,
    Pf,
}

/// A failure carrying its process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: 2, error: error.into() }
    }

    fn cap(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: 3, error: error.into() }
    }
}

/// Property-check failures exit 1 after the counterexample is printed.
const CHECK_FAILED: u8 = 1;

fn solve_err(e: SolveError) -> Failure {
    Failure::cap(e)
}

fn loop_err(e: LoopError) -> Failure {
    match e {
        LoopError::CapExceeded { .. } => Failure::cap(e),
        LoopError::Solve(inner) => Failure::cap(inner),
    }
}

fn usage<T, E: Into<anyhow::Error>>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::usage(e.into()))
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    usage(fs::read_to_string(path).with_context(|| format!("reading {}", path.display())))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => usage(
            fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        ),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_program(path: &PathBuf) -> Result<Program, Failure> {
    let text = read(path)?;
    usage(parse_program(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Solve { file, formalism, caps } => cmd_solve(&file, formalism, caps),
        Command::Complete { file, dimacs } => cmd_complete(&file, dimacs),
        Command::Loops { file, json, caps } => cmd_loops(&file, json, caps),
        Command::LoopFormulas { file, caps } => cmd_loop_formulas(&file, caps),
        Command::Simplify { file, verify, out, caps } => cmd_simplify(&file, verify, &out, caps),
        Command::Generate { formalism, n, out } => cmd_generate(formalism.into(), n, &out),
        Command::Check { property, file, n, random, seed, count, max_n, max_rules } => {
            // The enumeration caps come from the environment here; the
            // --max-n flag bounds the random signatures instead.
            let caps = Caps { max_n: None, max_loops: None };
            if random {
                cmd_check_random(property, seed, count, max_n, max_rules, caps)
            } else {
                let file = file.ok_or_else(|| {
                    Failure::usage(anyhow::anyhow!("a program file is required without --random"))
                })?;
                cmd_check_file(property, &file, n, caps)
            }
        }
        Command::Translate { file, to: TranslateTarget::Tv, from, n, out } => {
            cmd_translate(&file, from, n, &out)
        }
        Command::BenchSizes { n_max, json } => cmd_bench(n_max, json),
    }
}

fn cmd_solve(file: &PathBuf, formalism: FormalismArg, caps: Caps) -> Result<u8, Failure> {
    let cap = caps.solve();
    let id = file.display().to_string();
    let report = match formalism {
        FormalismArg::Cp | FormalismArg::Lp => {
            let p = load_program(file)?;
            answer_set_report(&p, id, cap).map_err(solve_err)?
        }
        FormalismArg::Cc => {
            let p = usage(parse_cc(&read(file)?))?;
            cc_answer_sets(&p, id, cap).map_err(solve_err)?
        }
        FormalismArg::Dt => {
            let d = usage(parse_dt(&read(file)?))?;
            dt_models(&d, id, cap).map_err(solve_err)?
        }
        FormalismArg::Tv => {
            let p = usage(parse_tv(&read(file)?))?;
            tv_models(&p, id, cap).map_err(solve_err)?
        }
        FormalismArg::Pf => {
            let f = usage(parse_formula(&read(file)?))?;
            let n = f.max_var();
            let sets = models(&[f], n, cap).map_err(solve_err)?;
            cpkit_core::semantics::AnswerSetReport::new(id, n, sets)
        }
    };
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    Ok(0)
}

fn cmd_complete(file: &PathBuf, dimacs: bool) -> Result<u8, Failure> {
    let p = load_program(file)?;
    let formulas = completion(&p);
    if dimacs {
        let text = usage(to_dimacs(&formulas, p.signature_size()))?;
        print!("{text}");
    } else {
        for f in formulas {
            println!("{f}");
        }
    }
    Ok(0)
}

fn cmd_loops(file: &PathBuf, json: bool, caps: Caps) -> Result<u8, Failure> {
    let p = load_program(file)?;
    let loops = enumerate_loops(&p, caps.loops()).map_err(loop_err)?;
    if json {
        let items: Vec<Vec<String>> = loops
            .iter()
            .map(|u| u.vars().iter().map(|v| v.to_string()).collect())
            .collect();
        println!("{}", json!({ "loops": items, "count": items.len() }));
    } else {
        for u in &loops {
            println!("{u}");
        }
    }
    Ok(0)
}

fn cmd_loop_formulas(file: &PathBuf, caps: Caps) -> Result<u8, Failure> {
    let p = load_program(file)?;
    let lf = loop_formulas(&p, caps.loops()).map_err(loop_err)?;
    println!("{lf}");
    Ok(0)
}

fn cmd_simplify(
    file: &PathBuf,
    verify: VerifyArg,
    out: &Option<PathBuf>,
    caps: Caps,
) -> Result<u8, Failure> {
    let p = load_program(file)?;
    let opts = SimplifyOptions {
        verification: match verify {
            VerifyArg::Auto => Verification::Auto,
            VerifyArg::On => Verification::On,
            VerifyArg::Off => Verification::Off,
        },
        solve_cap: caps.solve(),
        loop_cap: caps.loops(),
    };
    let (simplified, trace) = simplify_parity(&p, &opts).map_err(|e| match e {
        SimplifyError::Solve(inner) => solve_err(inner),
        SimplifyError::Loops(inner) => loop_err(inner),
        other => Failure::usage(other),
    })?;
    write_out(out, &simplified.to_string())?;
    eprintln!("{}", serde_json::to_string(&trace).expect("trace serializes"));
    Ok(0)
}

fn cmd_generate(formalism: Formalism, n: u32, out: &Option<PathBuf>) -> Result<u8, Failure> {
    let instance = usage(generate(formalism, n))?;
    write_out(out, &instance.artifact.render())?;
    Ok(0)
}

fn check_verdict(property: &str, holds: bool, counterexample: serde_json::Value) -> u8 {
    if holds {
        println!("{}", json!({ "property": property, "holds": true }));
        0
    } else {
        println!(
            "{}",
            json!({ "property": property, "holds": false, "counterexample": counterexample })
        );
        CHECK_FAILED
    }
}

fn cmd_check_file(
    property: Property,
    file: &PathBuf,
    n: Option<u32>,
    caps: Caps,
) -> Result<u8, Failure> {
    let p = load_program(file)?;
    let (holds, counterexample) = evaluate_property(property, &p, n, caps)?;
    Ok(check_verdict(property_name(property), holds, counterexample))
}

fn property_name(p: Property) -> &'static str {
    match p {
        Property::LinZhao => "lin-zhao",
        Property::Fages => "fages",
        Property::Antichain => "antichain",
        Property::Parity => "parity",
    }
}

fn evaluate_property(
    property: Property,
    p: &Program,
    n: Option<u32>,
    caps: Caps,
) -> Result<(bool, serde_json::Value), Failure> {
    let solve_cap = caps.solve();
    let loop_cap = caps.loops();
    match property {
        Property::LinZhao => {
            let ans = answer_sets_capped(p, solve_cap).map_err(solve_err)?;
            let mut formulas = completion(p);
            formulas.push(loop_formulas(p, loop_cap).map_err(loop_err)?);
            let m = models(&formulas, p.signature_size(), solve_cap).map_err(solve_err)?;
            Ok(model_mismatch(&ans, &m))
        }
        Property::Fages => {
            let loops = enumerate_loops(p, loop_cap).map_err(loop_err)?;
            if let Some(first) = loops.first() {
                return Ok((false, json!({ "loop": first.to_string() })));
            }
            let ans = answer_sets_capped(p, solve_cap).map_err(solve_err)?;
            let m = models(&completion(p), p.signature_size(), solve_cap).map_err(solve_err)?;
            Ok(model_mismatch(&ans, &m))
        }
        Property::Antichain => {
            let report = answer_set_report(p, "check", solve_cap).map_err(solve_err)?;
            for (i, a) in report.answer_sets.iter().enumerate() {
                for b in &report.answer_sets[i + 1..] {
                    let (small, large) = if a.is_subset_of(b) {
                        (a, b)
                    } else if b.is_subset_of(a) {
                        (b, a)
                    } else {
                        continue;
                    };
                    return Ok((
                        false,
                        json!({ "subset": small.to_string(), "superset": large.to_string() }),
                    ));
                }
            }
            Ok((true, serde_json::Value::Null))
        }
        Property::Parity => {
            let n = n.unwrap_or_else(|| p.signature_size());
            if n != p.signature_size() {
                return Ok((
                    false,
                    json!({ "declared": p.signature_size(), "expected": n }),
                ));
            }
            let ans = answer_sets_capped(p, solve_cap).map_err(solve_err)?;
            Ok(model_mismatch(&ans, &odd_strings(n)))
        }
    }
}

/// First witness in the symmetric difference, reported from the answer-set
/// side perspective.
fn model_mismatch(
    ans: &[Interpretation],
    other: &[Interpretation],
) -> (bool, serde_json::Value) {
    for i in ans {
        if !other.contains(i) {
            return (
                false,
                json!({ "interpretation": i.to_string(), "answer_set": true, "expected": false }),
            );
        }
    }
    for i in other {
        if !ans.contains(i) {
            return (
                false,
                json!({ "interpretation": i.to_string(), "answer_set": false, "expected": true }),
            );
        }
    }
    (true, serde_json::Value::Null)
}

fn cmd_check_random(
    property: Property,
    seed: u64,
    count: usize,
    max_n: u32,
    max_rules: usize,
    caps: Caps,
) -> Result<u8, Failure> {
    let mut rng = Rng::new(seed);
    for case in 0..count {
        let n = rng.range_inclusive(1, max_n as u64) as u32;
        let shape = match property {
            Property::Antichain => ProgramShape::normal(n, max_rules),
            _ => ProgramShape::canonical(n, max_rules),
        };
        let p = random_program(&mut rng, &shape);
        let verdict = match property {
            Property::Parity | Property::Fages => {
                return Err(Failure::usage(anyhow::anyhow!(
                    "property `{}` describes one concrete program; \
                     --random applies to lin-zhao and antichain",
                    property_name(property)
                )));
            }
            Property::LinZhao => {
                check_lin_zhao(&p, caps.solve(), caps.loops()).map_err(loop_err)?
            }
            Property::Antichain => answer_set_report(&p, "check", caps.solve())
                .map_err(solve_err)?
                .is_antichain(),
        };
        if !verdict {
            println!(
                "{}",
                json!({
                    "property": property_name(property),
                    "holds": false,
                    "seed": seed,
                    "case": case,
                    "program": p.to_string(),
                })
            );
            return Ok(CHECK_FAILED);
        }
    }
    println!(
        "{}",
        json!({ "property": property_name(property), "holds": true, "checked": count })
    );
    Ok(0)
}

fn cmd_translate(
    file: &PathBuf,
    from: TranslateSource,
    n: Option<u32>,
    out: &Option<PathBuf>,
) -> Result<u8, Failure> {
    let translated = match from {
        TranslateSource::Cp => cp_to_tv(&load_program(file)?),
        TranslateSource::Dt => dt_to_tv(&usage(parse_dt(&read(file)?))?),
        TranslateSource::Pf => {
            let f = usage(parse_formula(&read(file)?))?;
            let n = n.unwrap_or_else(|| f.max_var());
            if n == 0 {
                return Err(Failure::usage(anyhow::anyhow!(
                    "the formula mentions no variables; pass --n to fix the signature"
                )));
            }
            if f.max_var() > n {
                return Err(Failure::usage(anyhow::anyhow!(
                    "the formula mentions x{} but --n is {n}",
                    f.max_var()
                )));
            }
            pf_to_tv(&f, n)
        }
    };
    write_out(out, &translated.to_string())?;
    Ok(0)
}

fn cmd_bench(n_max: u32, json_out: bool) -> Result<u8, Failure> {
    let table = size_table(n_max);
    if json_out {
        println!("{}", serde_json::to_string(&table).expect("rows serialize"));
        return Ok(0);
    }
    println!(
        "{:>3} {:>10} {:>4} {:>9} {:>7} {:>9} {:>9} {:>9}",
        "n", "cp", "lp", "cc-rules", "cc-cst", "dt", "tv", "pf"
    );
    for row in table {
        println!(
            "{:>3} {:>10} {:>4} {:>9} {:>7} {:>9} {:>9} {:>9}",
            row.n,
            row.cp_rules,
            row.lp_rules.map_or_else(|| "-".to_string(), |v| v.to_string()),
            row.cc_rules,
            row.cc_constraints,
            row.dt_size,
            row.tv_rules,
            row.pf_size,
        );
    }
    Ok(0)
}
