//! Command-line surface: generate instances, evaluate reachability, run the
//! solvers, check structural properties, and verify generated instances
//! against their embedded metadata.
//!
//! Exactly one JSON document goes to standard output; diagnostics go to
//! standard error. Exit codes: 0 success, 1 domain refusal (infeasible
//! decision, failed check, failed verification), 2 usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Value, json};

use tripnet::gen::{
    Formula, SimpleGapVariant, gen_hard_family, gen_mroett, gen_o2o, gen_random_symmetric,
    gen_simple_gaps, gen_sqrtn_gap, gen_ssmrtt_gap, gen_sym, parse_and_normalize,
};
use tripnet::model::{AnySchedule, Schedule, Temporalisation, TripNetwork, WeakSchedule};
use tripnet::solve::{
    self, ExactMode, ExactOptions, FptMode, OracleOptions, TemporalisabilityMode,
};
use tripnet::{Error as CoreError, reach_report_threads, schedule_to_temporalisation};

mod verify;

#[derive(Parser)]
#[command(name = "tripnet", version, about = "Trip temporalisation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance family member.
    Gen(GenArgs),
    /// Evaluate temporal reachability under an assignment of starting times.
    Eval(EvalArgs),
    /// Run a solver.
    Solve(SolveArgs),
    /// Decide a structural property.
    Check(CheckArgs),
    /// Re-run the generator-appropriate checks of a generated instance.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    O2o,
    Mroett,
    Sym,
    HardFamily,
    GapSsmrtt,
    GapSimple,
    GapSqrtn,
    RandomSym,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// DIMACS CNF input (o2o, mroett, sym).
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// Ladder width (hard-family).
    #[arg(long)]
    r: Option<usize>,
    /// Base instance file (gap generators).
    #[arg(long)]
    base: Option<PathBuf>,
    /// Base source node (gap generators).
    #[arg(long)]
    s: Option<usize>,
    /// Base target node (gap generators).
    #[arg(long)]
    t: Option<usize>,
    /// Gap parameter in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Constant factor for the default reward sizes (gap-simple).
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Override for the reward/stub multiplicity K.
    #[arg(long = "K")]
    k: Option<i64>,
    /// Override for the block size M (mroett).
    #[arg(long = "M")]
    m: Option<i64>,
    /// gap-simple variant: mrtt or ssmrtt.
    #[arg(long)]
    variant: Option<String>,
    /// Node count (random-sym).
    #[arg(long)]
    n: Option<usize>,
    /// Trip pair count (random-sym).
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; without it the instance JSON goes to standard output.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Instance file.
    network: PathBuf,
    /// Schedule file {"order":[...]}.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Weak schedule file {"blocks":[[...],...]}.
    #[arg(long)]
    weak: Option<PathBuf>,
    /// Temporalisation file {"starts":[...]}.
    #[arg(long)]
    tau: Option<PathBuf>,
    /// Include per-source reach sets.
    #[arg(long)]
    sets: bool,
    /// Comma-separated sources for the subtotal convention.
    #[arg(long)]
    subtotal_sources: Option<String>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alg {
    BruteSched,
    BruteWeak,
    BruteGrid,
    SymApprox,
    Fpt,
    Oracle,
}

#[derive(Args)]
struct SolveArgs {
    network: PathBuf,
    #[arg(long, value_enum)]
    alg: Alg,
    /// Source node (oracle, fpt) or objective restriction (brute-*).
    #[arg(long)]
    s: Option<usize>,
    /// Target node (oracle, fpt).
    #[arg(long)]
    t: Option<usize>,
    /// Trip budget (fpt).
    #[arg(long)]
    k: Option<usize>,
    /// fpt mode: random, exhaustive, or oracle.
    #[arg(long, default_value = "random")]
    mode: String,
    /// Random-coloring trial count (fpt random mode).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid horizon (brute-grid); defaults to twice the total duration.
    #[arg(long)]
    horizon: Option<i64>,
    /// Candidate or state cap.
    #[arg(long)]
    cap: Option<u64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prop {
    Symmetric,
    StronglyConnected,
    OneEdge,
    StronglyTemporalisable,
}

#[derive(Args)]
struct CheckArgs {
    network: PathBuf,
    #[arg(long, value_enum)]
    prop: Prop,
    /// State cap for the brute-force fallback.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    network: PathBuf,
    /// Comma-separated truth assignment ("1,0,1") for the reductions.
    #[arg(long)]
    assignment: Option<String>,
    /// Sampled schedules for bound checks.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

/// Domain refusal (exit 1) as opposed to usage errors (exit 2).
enum Failure {
    Domain(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        match e {
            CoreError::CapExceeded { .. }
            | CoreError::StateCapExceeded { .. }
            | CoreError::TooManyTrips(..)
            | CoreError::BadParameter(_)
            | CoreError::Overflow(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

type CmdResult = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Check(args) => cmd_check(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(payload) => {
            println!("{payload}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn read_instance(path: &Path) -> Result<TripNetwork, Failure> {
    let text = std::fs::read_to_string(path).map_err(usage)?;
    let net: TripNetwork = serde_json::from_str(&text).map_err(usage)?;
    let violations = net.validate();
    if !violations.is_empty() {
        return Err(Failure::Domain(format!(
            "instance fails validation: {}",
            violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        )));
    }
    Ok(net)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(usage)?;
    serde_json::from_str(&text).map_err(usage)
}

fn parse_id_list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map_err(usage))
        .collect()
}

fn parse_assignment(text: &str) -> Result<Vec<bool>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.trim() {
            "1" | "true" | "t" => Ok(true),
            "0" | "false" | "f" => Ok(false),
            other => Err(Failure::Usage(format!("bad assignment entry: {other}"))),
        })
        .collect()
}

fn load_formula(args: &GenArgs) -> Result<Formula, Failure> {
    let path = args.cnf.as_ref().ok_or(Failure::Usage("--cnf is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(usage)?;
    parse_and_normalize(&text).map_err(Failure::from)
}

fn cmd_gen(args: GenArgs) -> CmdResult {
    let net = match args.kind {
        GenKind::O2o => {
            let f = load_formula(&args)?;
            let (net, _, _) = gen_o2o(&f)?;
            net
        }
        GenKind::Mroett => {
            let f = load_formula(&args)?;
            let (net, _, _) = gen_mroett(&f, args.k, args.m)?;
            net
        }
        GenKind::Sym => {
            let f = load_formula(&args)?;
            let (net, _) = gen_sym(&f)?;
            net
        }
        GenKind::HardFamily => {
            let r = args.r.ok_or(Failure::Usage("--r is required".into()))?;
            gen_hard_family(r)?.0
        }
        GenKind::GapSsmrtt => {
            let (base, s, t) = gap_base(&args)?;
            gen_ssmrtt_gap(&base, s, t, args.eps, args.k)?.0
        }
        GenKind::GapSimple => {
            let (base, s, t) = gap_base(&args)?;
            let variant = match args.variant.as_deref() {
                Some("mrtt") => SimpleGapVariant::Mrtt,
                Some("ssmrtt") => SimpleGapVariant::Ssmrtt,
                other => {
                    return Err(Failure::Usage(format!(
                        "--variant must be mrtt or ssmrtt, got {other:?}"
                    )));
                }
            };
            gen_simple_gaps(&base, s, t, variant, args.k, args.c, args.eps)?
        }
        GenKind::GapSqrtn => {
            let (base, s, t) = gap_base(&args)?;
            gen_sqrtn_gap(&base, s, t)?
        }
        GenKind::RandomSym => {
            let n = args.n.ok_or(Failure::Usage("--n is required".into()))?;
            let pairs = args.pairs.ok_or(Failure::Usage("--pairs is required".into()))?;
            gen_random_symmetric(n, pairs, args.seed)?
        }
    };
    let doc = serde_json::to_value(&net).map_err(usage)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, format!("{doc}\n")).map_err(usage)?;
            Ok(json!({
                "written": path.display().to_string(),
                "nodes": net.node_count,
                "edges": net.edges.len(),
                "trips": net.trip_count(),
                "meta": net.meta,
            }))
        }
        None => Ok(doc),
    }
}

fn gap_base(args: &GenArgs) -> Result<(TripNetwork, usize, usize), Failure> {
    let path = args.base.as_ref().ok_or(Failure::Usage("--base is required".into()))?;
    let base = read_instance(path)?;
    let s = args.s.ok_or(Failure::Usage("--s is required".into()))?;
    let t = args.t.ok_or(Failure::Usage("--t is required".into()))?;
    Ok((base, s, t))
}

fn load_assignment_file(args: &EvalArgs, net: &TripNetwork) -> Result<Temporalisation, Failure> {
    let picked = [args.schedule.is_some(), args.weak.is_some(), args.tau.is_some()]
        .iter()
        .filter(|&&x| x)
        .count();
    if picked != 1 {
        return Err(Failure::Usage("pass exactly one of --schedule, --weak, --tau".into()));
    }
    if let Some(path) = &args.schedule {
        let sched: Schedule = read_json(path)?;
        return schedule_to_temporalisation(net, &AnySchedule::Strict(sched)).map_err(Failure::from);
    }
    if let Some(path) = &args.weak {
        let weak: WeakSchedule = read_json(path)?;
        return schedule_to_temporalisation(net, &AnySchedule::Weak(weak)).map_err(Failure::from);
    }
    let tau: Temporalisation = read_json(args.tau.as_ref().unwrap())?;
    tau.check_len(net).map_err(Failure::from)?;
    Ok(tau)
}

fn cmd_eval(args: EvalArgs) -> CmdResult {
    let net = read_instance(&args.network)?;
    let tau = load_assignment_file(&args, &net)?;
    let mut report = reach_report_threads(&net, &tau, args.sets, args.threads)?;
    if let Some(sources) = &args.subtotal_sources {
        let sources = parse_id_list(sources)?;
        if sources.iter().any(|&s| s >= net.node_count) {
            return Err(Failure::Usage("subtotal source out of range".into()));
        }
        report = report.with_subtotal(&sources);
    }
    let doc = serde_json::to_value(&report).map_err(usage)?;
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{doc}\n")).map_err(usage)?;
    }
    Ok(doc)
}

fn cmd_solve(args: SolveArgs) -> CmdResult {
    let net = read_instance(&args.network)?;
    let started = std::time::Instant::now();
    let (payload, feasible) = run_solver(&args, &net)?;
    let elapsed = started.elapsed().as_millis() as u64;
    if let Some(path) = &args.out {
        let mut with_time = payload.clone();
        with_time["stats"]["elapsed_ms"] = json!(elapsed);
        std::fs::write(path, format!("{with_time}\n")).map_err(usage)?;
    }
    if !feasible {
        // Decision refusals still print their payload.
        println!("{payload}");
        std::process::exit(1);
    }
    Ok(payload)
}

fn run_solver(args: &SolveArgs, net: &TripNetwork) -> Result<(Value, bool), Failure> {
    let alg_name = match args.alg {
        Alg::BruteSched => "brute-sched",
        Alg::BruteWeak => "brute-weak",
        Alg::BruteGrid => "brute-grid",
        Alg::SymApprox => "sym-approx",
        Alg::Fpt => "fpt",
        Alg::Oracle => "oracle",
    };
    match args.alg {
        Alg::BruteSched | Alg::BruteWeak | Alg::BruteGrid => {
            let mode = match args.alg {
                Alg::BruteSched => ExactMode::Perm,
                Alg::BruteWeak => ExactMode::Weak,
                _ => ExactMode::Grid,
            };
            let opts = ExactOptions {
                cap: args.cap.map_or(tripnet::solve::exact::DEFAULT_CAP, u128::from),
                horizon: args.horizon,
                source: args.s,
            };
            let res = solve::exact_best(net, mode, &opts)?;
            let assignment = match &res.assignment {
                solve::BestAssignment::Schedule(s) => json!({"schedule": s}),
                solve::BestAssignment::Weak(w) => json!({"weak": w}),
                solve::BestAssignment::Starts(t) => json!({"starts": t.starts}),
            };
            Ok((
                json!({
                    "alg": alg_name,
                    "value": res.value,
                    "assignment": assignment,
                    "witness": Value::Null,
                    "stats": {"explored": res.explored as u64, "trials": Value::Null, "seed": args.seed},
                }),
                true,
            ))
        }
        Alg::SymApprox => {
            let res = solve::symmetric_approx_schedule(net)?;
            Ok((
                json!({
                    "alg": alg_name,
                    "value": res.report.total,
                    "assignment": {"schedule": res.schedule},
                    "witness": Value::Null,
                    "stats": {
                        "explored": 0,
                        "trials": Value::Null,
                        "seed": args.seed,
                        "heavy_centroid": res.heavy_centroid,
                        "guarantee": solve::approx_guarantee(net.node_count),
                    },
                }),
                true,
            ))
        }
        Alg::Oracle => {
            let s = args.s.ok_or(Failure::Usage("--s is required".into()))?;
            let t = args.t.ok_or(Failure::Usage("--t is required".into()))?;
            let opts = OracleOptions {
                k_cap: args.k,
                state_cap: args.cap.map_or(tripnet::solve::oracle::DEFAULT_STATE_CAP, |c| c as usize),
            };
            let out = solve::o2o_oracle(net, s, t, &opts)?;
            Ok((
                json!({
                    "alg": alg_name,
                    "value": u64::from(out.feasible),
                    "assignment": Value::Null,
                    "witness": out.witness,
                    "stats": {"explored": out.explored as u64, "trials": Value::Null, "seed": args.seed},
                }),
                out.feasible,
            ))
        }
        Alg::Fpt => {
            let s = args.s.ok_or(Failure::Usage("--s is required".into()))?;
            let t = args.t.ok_or(Failure::Usage("--t is required".into()))?;
            let k = args.k.ok_or(Failure::Usage("--k is required".into()))?;
            let mode = match args.mode.as_str() {
                "random" => FptMode::Random { trials: args.trials, seed: args.seed },
                "exhaustive" => FptMode::Exhaustive,
                "oracle" => FptMode::Oracle,
                other => return Err(Failure::Usage(format!("unknown fpt mode: {other}"))),
            };
            let out = solve::fpt_o2o(net, s, t, k, mode)?;
            Ok((
                json!({
                    "alg": alg_name,
                    "value": u64::from(out.feasible),
                    "assignment": Value::Null,
                    "witness": out.witness,
                    "stats": {"explored": Value::Null, "trials": out.trials, "seed": args.seed},
                }),
                out.feasible,
            ))
        }
    }
}

fn cmd_check(args: CheckArgs) -> CmdResult {
    let net = read_instance(&args.network)?;
    let (holds, certificate): (bool, Value) = match args.prop {
        Prop::Symmetric => match tripnet::symmetric_pairing(&net) {
            Ok(pairing) => (true, json!({"pairs": pairing.pairs})),
            Err(witness) => (false, json!({"witness_trip": witness})),
        },
        Prop::StronglyConnected => (net.strongly_connected(), Value::Null),
        Prop::OneEdge => match net.trips.iter().position(|t| t.len() != 1) {
            None => (true, Value::Null),
            Some(t) => (false, json!({"witness_trip": t})),
        },
        Prop::StronglyTemporalisable => {
            let opts = OracleOptions {
                k_cap: None,
                state_cap: args.cap.map_or(tripnet::solve::oracle::DEFAULT_STATE_CAP, |c| c as usize),
            };
            let out = solve::strongly_temporalisable_check(&net, TemporalisabilityMode::Auto, &opts)?;
            let cert = match out.certificate {
                Some((u, v)) => json!({"unconnectable_pair": [u, v]}),
                None => Value::Null,
            };
            (out.strongly_temporalisable, cert)
        }
    };
    let payload = json!({
        "prop": match args.prop {
            Prop::Symmetric => "symmetric",
            Prop::StronglyConnected => "strongly-connected",
            Prop::OneEdge => "one-edge",
            Prop::StronglyTemporalisable => "strongly-temporalisable",
        },
        "holds": holds,
        "certificate": certificate,
    });
    if holds {
        Ok(payload)
    } else {
        println!("{payload}");
        std::process::exit(1);
    }
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let net = read_instance(&args.network)?;
    let meta = net
        .meta
        .clone()
        .ok_or(Failure::Usage("instance carries no generator metadata".into()))?;
    let assignment = match &args.assignment {
        Some(text) => Some(parse_assignment(text)?),
        None => None,
    };
    let report = verify::run(&net, &meta, assignment.as_deref(), args.samples, args.seed, args.threads)?;
    let all_passed = report.iter().all(|c| c.passed);
    let payload = json!({
        "generator": meta.generator,
        "checks": report.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
        "passed": all_passed,
    });
    if all_passed {
        Ok(payload)
    } else {
        println!("{payload}");
        std::process::exit(1);
    }
}
