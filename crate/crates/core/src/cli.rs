//! Batch front-end: parse scenario files, dispatch to the engines, emit
//! reports, and run the built-in acceptance suite.
//!
//! Exit codes: 0 when every scenario is decided (yes or no), 2 when some
//! scenario is undecided, 1 on input or processing errors.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::descent;
use crate::error::{Decision, Error, Result};
use crate::hermitian::DivisionAlgebra;
use crate::quadforms::{systems, witt};
use crate::quaternion;
use crate::report::{self, Report};
use crate::scenario::{self, ResolvedObject, Scenario, Task};
use crate::selftest;

#[derive(Parser)]
#[command(
    name = "witt-descent",
    version,
    about = "Exact decision and construction of quadratic descent for quadratic forms, \
             systems and hermitian forms over quaternion algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario files.
    Run(RunArgs),
    /// Run the built-in acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario files to execute.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the scenario search budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Write machine-readable reports (one JSON document per scenario).
    #[arg(long, value_name = "PATH")]
    json_out: Option<PathBuf>,
    /// Run independent scenarios in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Add route citations and intermediate invariants to the output.
    #[arg(long)]
    explain: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Only run criteria whose name contains this substring.
    #[arg(long)]
    filter: Option<String>,
    /// Seed for the randomized portions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run_command(args),
        Command::Selftest(args) => {
            let opts = selftest::SelftestOptions { seed: args.seed, filter: args.filter };
            let results = selftest::run(&opts);
            if results.is_empty() {
                eprintln!("no criteria matched the filter");
                return 1;
            }
            if results.iter().all(|r| r.passed) {
                0
            } else {
                1
            }
        }
    }
}

fn run_command(args: RunArgs) -> i32 {
    let outcomes: Vec<Result<Report>> = if args.jobs > 1 && args.files.len() > 1 {
        run_parallel(&args)
    } else {
        args.files
            .iter()
            .map(|path| run_file(path, args.seed, args.budget))
            .collect()
    };
    let mut json_lines = Vec::new();
    let mut exit = 0i32;
    for (path, outcome) in args.files.iter().zip(outcomes) {
        match outcome {
            Ok(report) => {
                print!("{}", report.render_human(args.explain));
                println!("---");
                json_lines.push(report.to_json_line());
                if report.decision == Some(Decision::Undecided) && exit == 0 {
                    exit = 2;
                }
            }
            Err(e) => {
                eprintln!("{}: error: {e}", path.display());
                json_lines.push(
                    json!({
                        "schema": report::SCHEMA,
                        "file": path.display().to_string(),
                        "error": e.to_string(),
                    })
                    .to_string(),
                );
                exit = 1;
            }
        }
    }
    if let Some(path) = &args.json_out {
        let body = json_lines.join("\n") + "\n";
        if let Err(e) = std::fs::File::create(path).and_then(|mut f| f.write_all(body.as_bytes()))
        {
            eprintln!("cannot write {}: {e}", path.display());
            return 1;
        }
    }
    exit
}

fn run_parallel(args: &RunArgs) -> Vec<Result<Report>> {
    let mut results: Vec<Option<Result<Report>>> = (0..args.files.len()).map(|_| None).collect();
    let jobs = args.jobs.max(1);
    std::thread::scope(|scope| {
        let chunks: Vec<Vec<usize>> = (0..jobs)
            .map(|w| (w..args.files.len()).step_by(jobs).collect())
            .collect();
        let mut handles = Vec::new();
        for chunk in chunks {
            let files = &args.files;
            let seed = args.seed;
            let budget = args.budget;
            handles.push(scope.spawn(move || {
                chunk
                    .into_iter()
                    .map(|i| (i, run_file(&files[i], seed, budget)))
                    .collect::<Vec<_>>()
            }));
        }
        for handle in handles {
            for (i, r) in handle.join().expect("worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    results.into_iter().map(|r| r.expect("all filled")).collect()
}

fn run_file(path: &PathBuf, seed: Option<u64>, budget: Option<u64>) -> Result<Report> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let mut scenario = scenario::parse_scenario(&text)?;
    if let Some(s) = seed {
        scenario.seed = s;
    }
    if let Some(b) = budget {
        scenario.budget = b;
    }
    execute(&scenario)
}

/// Executes a resolved scenario and assembles its report.
pub fn execute(s: &Scenario) -> Result<Report> {
    let start = Instant::now();
    let input = scenario::print_scenario(s);
    let (payload, decision) = match (s.task, &s.object) {
        (Task::ReproduceRemark, _) => {
            let rep = descent::remark_counterexample_check()?;
            let line = rep.verdict_line.clone();
            (json!({"remark": rep, "verdict": line}), None)
        }
        (Task::ReproduceErratum, _) => {
            let rep = descent::erratum_counterexample_check(s.budget, s.seed)?;
            let line = rep.verdict_line.clone();
            (json!({"erratum": rep, "verdict": line}), None)
        }
        (Task::Witt, ResolvedObject::Form(q)) => match witt::witt_decompose(q) {
            Ok(rep) => {
                let hyper = rep.hyperbolic;
                (json!({"witt": rep, "hyperbolic": hyper}), None)
            }
            Err(Error::Undecided(msg)) => {
                (json!({"undecided": msg}), Some(Decision::Undecided))
            }
            Err(e) => return Err(e),
        },
        (Task::Metabolic, ResolvedObject::System(sys)) => {
            let (dec, witness) = systems::system_is_metabolic(sys, s.budget, s.seed)?;
            let witness_json = witness.map(|basis| {
                basis
                    .iter()
                    .map(|v| {
                        let f = sys.field();
                        let cells: Vec<String> = v.iter().map(|c| f.fmt_elem(c)).collect();
                        format!("({})", cells.join(", "))
                    })
                    .collect::<Vec<_>>()
            });
            (
                json!({"metabolic": dec, "witness_subspace": witness_json}),
                Some(dec),
            )
        }
        (Task::Descend, ResolvedObject::Form(q)) => {
            let verdict = descent::quad_descent_construct(q, s.budget, s.seed)?;
            let d = verdict.decision;
            (report::verdict_to_json(&verdict), Some(d))
        }
        (Task::Descend, ResolvedObject::System(sys)) => {
            let verdict = descent::system_descent(sys, s.budget, s.seed)?;
            let d = verdict.decision;
            (report::verdict_to_json(&verdict), Some(d))
        }
        (Task::Descend, ResolvedObject::Algebra(alg)) => {
            let out = quaternion::alg_descent(alg, s.budget, s.seed)?;
            let descended = out.descended.as_ref().map(report::algebra_to_json);
            (
                json!({
                    "decision": out.decision,
                    "cor": out.cor,
                    "skew_line_rational": out.skew_line_rational,
                    "descended": descended,
                }),
                Some(out.decision),
            )
        }
        (Task::Descend, ResolvedObject::Hermitian(h)) => {
            let extended = match h.ring() {
                DivisionAlgebra::Field(_) => true,
                DivisionAlgebra::Quaternion(q) => q.restrict_to_base().is_some(),
            };
            let verdict = if extended {
                descent::hermitian_descent_construct(h, s.budget, s.seed)?
            } else {
                descent::quaternionic_descent_to_f(h, s.budget, s.seed)?
            };
            let d = verdict.decision;
            (report::verdict_to_json(&verdict), Some(d))
        }
        (Task::CorSplit, ResolvedObject::Algebra(alg)) => {
            let rep = quaternion::cor_split_test(&alg.alg, s.budget, s.seed)?;
            let d = rep.verdict;
            (json!({"cor": rep}), Some(d))
        }
        (task, obj) => {
            return Err(Error::InvalidInput(format!(
                "task `{}` cannot consume this object ({})",
                task.as_str(),
                object_kind(obj)
            )));
        }
    };
    Ok(Report {
        task: s.task.as_str().to_string(),
        input,
        payload,
        decision,
        timing_ms: start.elapsed().as_millis(),
    })
}

fn object_kind(o: &ResolvedObject) -> &'static str {
    match o {
        ResolvedObject::None => "none",
        ResolvedObject::Form(_) => "quadratic-form",
        ResolvedObject::System(_) => "system",
        ResolvedObject::Algebra(_) => "quaternion",
        ResolvedObject::Hermitian(_) => "hermitian",
    }
}
