use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;

use skappa::analysis::{
    find_n, hindmarsh_test, max_epsilon, plateau_classify_with, verify_witness, witness_plan, HindmarshOutcome,
    DEFAULT_SHRINK_ROUNDS,
};
use skappa::hermitian::TolerancePolicy;
use skappa::model::{FunctionSpec, PointConfig, StandardFunction, UnitDiskPoint};
use skappa::pick::{kn_profile_with, Region, SearchBudget};
use skappa::realization::{build_theta, realize_blaschke};
use skappa::{seed, Error};

const AFTER_HELP: &str = "\
CSV columns (header row, LF line endings, complex values as RE+IMi with 17 significant digits):
  profile          n,best_count,samples_used,witness        (witness nodes joined by ';')
  classify         kappa_hat,n_first,n_hat,q_hat,l_hat,bound_check,double_kappa_check,n_min,n_min_exact
  witness          epsilon,negative                         (one row per shrink round)
  verify-theta     check,value,limit,pass
  verify-blaschke  check,value,limit,pass
  hindmarsh        verdict,triples_tested,z1,z2,z3,eigenvalue

Exit codes: 0 success, 2 invalid input, 3 numerical contract violated, 4 inconclusive, 1 other.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Profile,
    Classify,
    Witness,
    VerifyTheta,
    VerifyBlaschke,
    Hindmarsh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "skappa", version, about = "Negative squares of Pick matrices on the unit disk", after_help = AFTER_HELP)]
struct Args {
    /// FunctionSpec JSON document.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum)]
    command: Command,
    /// Largest node count (profile) or number of realization nodes (verify-theta).
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    #[arg(long)]
    seed: u64,
    /// Relative eigenvalue threshold for inertia.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// `whole`, `disk,RE,IM,R` or `annulus,RMIN,RMAX,TMIN,TMAX`.
    #[arg(long, default_value = "whole", value_parser = parse_region)]
    region: Region,
    /// CONFIGS,ROUNDS
    #[arg(long, default_value = "200,40", value_parser = parse_budget)]
    budget: SearchBudget,
    /// Triples sampled by `hindmarsh`.
    #[arg(long, default_value_t = 10_000)]
    triples: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn parse_region(s: &str) -> Result<Region, String> {
    Region::parse(s).map_err(|e| e.to_string())
}

fn parse_budget(s: &str) -> Result<SearchBudget, String> {
    let (c, r) = s.split_once(',').ok_or("expected CONFIGS,ROUNDS")?;
    let c = c.trim().parse().map_err(|_| format!("bad config count '{c}'"))?;
    let r = r.trim().parse().map_err(|_| format!("bad round count '{r}'"))?;
    Ok(SearchBudget::new(c, r))
}

enum Failure {
    Validation(String),
    Numerical(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

macro_rules! from_module_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}
from_module_error!(
    skappa::model::ModelError,
    skappa::pick::PickError,
    skappa::analysis::AnalysisError,
    skappa::realization::RealizationError
);

/// What a command produced, plus whether it met its contract.
struct Outcome {
    csv: String,
    structured: serde_json::Value,
    status: Status,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Numerical,
    Inconclusive,
}

fn fmt_c(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
}

fn fmt_points(p: &[C64]) -> String {
    p.iter().map(|&z| fmt_c(z)).collect::<Vec<_>>().join(";")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report types serialize")
}

#[derive(Serialize)]
struct Check {
    check: &'static str,
    value: f64,
    limit: f64,
    pass: bool,
}

fn checks_outcome(checks: Vec<Check>, extra: serde_json::Value) -> Outcome {
    let mut csv = String::from("check,value,limit,pass\n");
    for c in &checks {
        writeln!(csv, "{},{:.16e},{:.16e},{}", c.check, c.value, c.limit, c.pass).unwrap();
    }
    let status = if checks.iter().all(|c| c.pass) { Status::Ok } else { Status::Numerical };
    Outcome {
        csv,
        structured: serde_json::json!({ "checks": json(&checks), "details": extra }),
        status,
    }
}

fn profile(f: &StandardFunction, args: &Args, policy: TolerancePolicy) -> Result<Outcome, Failure> {
    let r = kn_profile_with(f, args.n_max, &args.region, args.budget, args.seed, policy)?;
    let mut csv = String::from("n,best_count,samples_used,witness\n");
    for e in &r.per_n {
        writeln!(csv, "{},{},{},{}", e.n, e.best_count, e.samples_used, fmt_points(&e.witness.values())).unwrap();
    }
    let status = if r.exhausted { Status::Inconclusive } else { Status::Ok };
    match r.plateau {
        Some(p) => eprintln!("plateau {} from n = {}", p.value, p.first_n),
        None => eprintln!("no plateau within n_max = {}", args.n_max),
    }
    Ok(Outcome { csv, structured: json(&r), status })
}

fn classify(f: &StandardFunction, args: &Args, policy: TolerancePolicy) -> Result<Outcome, Failure> {
    let r = plateau_classify_with(f, &args.region, args.budget, args.seed, policy)?;
    let n = if matches!(args.region, Region::WholeDisk) {
        Some(find_n(f, args.budget, seed::derive(args.seed, &[0x4e]))?)
    } else {
        None
    };
    let mut csv = String::from("kappa_hat,n_first,n_hat,q_hat,l_hat,bound_check,double_kappa_check,n_min,n_min_exact\n");
    writeln!(
        csv,
        "{},{},{},{},{},{},{},{},{}",
        opt(r.kappa_hat),
        opt(r.n_first),
        opt(r.n_hat),
        r.q_hat,
        r.l_hat,
        serde_json::to_value(r.bound_check).unwrap().as_str().unwrap(),
        opt(r.double_kappa_check),
        opt(n.as_ref().map(|n| n.n_hat)),
        opt(n.as_ref().map(|n| n.exact)),
    )
    .unwrap();
    let status = if r.is_conclusive() { Status::Ok } else { Status::Inconclusive };
    Ok(Outcome {
        csv,
        structured: serde_json::json!({ "classification": json(&r), "n_min": json(&n) }),
        status,
    })
}

fn witness(f: &StandardFunction, args: &Args) -> Result<Outcome, Failure> {
    let eps = 1e-2f64.min(0.9 * max_epsilon(f));
    let plan = witness_plan(f, eps, args.seed)?;
    let v = verify_witness(f, &plan, DEFAULT_SHRINK_ROUNDS)?;
    let mut csv = String::from("epsilon,negative\n");
    for (e, k) in &v.trajectory {
        writeln!(csv, "{e:.16e},{k}").unwrap();
    }
    eprintln!("witness nodes: {}", fmt_points(&v.plan.points()));
    Ok(Outcome { csv, structured: json(&v), status: Status::Ok })
}

fn theta_nodes(f: &StandardFunction, args: &Args) -> Result<PointConfig, Failure> {
    let region = args.region.validated()?;
    let mut rng = seed::rng(args.seed, &[0x54]);
    let mut nodes: Vec<C64> = Vec::new();
    for _ in 0..100_000 {
        if nodes.len() == args.n_max {
            break;
        }
        let z = region.sample(&mut rng);
        let clear = nodes.iter().all(|w| (w - z).norm() > 0.05 * region.scale());
        let regular = f.jump_at(z).is_none() && f.blaschke().eval(z).norm() > 1e-3 && f.eval(z).is_ok();
        if clear && regular {
            nodes.push(z);
        }
    }
    if nodes.len() < args.n_max {
        return Err(Failure::Validation(format!("could only place {} of {} nodes", nodes.len(), args.n_max)));
    }
    Ok(PointConfig::from_values(&nodes)?)
}

fn verify_theta(f: &StandardFunction, args: &Args) -> Result<Outcome, Failure> {
    let nodes = theta_nodes(f, args)?;
    let th = build_theta(f, &nodes)?;
    let p_norm = th.pick().norm_inf();
    let inv_norm = th
        .p_inverse()
        .row_iter()
        .map(|r| r.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let circle = (0..64)
        .map(|k| th.j_unitarity_residual(C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 64.0)))
        .fold(0.0, f64::max);
    let inner: Vec<C64> = skappa::model::quasi_random_disk(10, 0.9);
    let kernel = inner
        .iter()
        .flat_map(|&z| inner.iter().map(move |&w| (z, w)))
        .map(|(z, w)| th.kernel_residual(z, w))
        .fold(0.0, f64::max);
    let checks = vec![
        Check {
            check: "stein_residual",
            value: th.stein_residual(),
            limit: 1e-11 * (1.0 + p_norm),
            pass: th.stein_residual() <= 1e-11 * (1.0 + p_norm),
        },
        Check { check: "j_unitarity", value: circle, limit: 1e-10, pass: circle <= 1e-10 },
        Check { check: "kernel_identity", value: kernel, limit: 1e-10 * (1.0 + inv_norm), pass: kernel <= 1e-10 * (1.0 + inv_norm) },
    ];
    Ok(checks_outcome(checks, serde_json::json!({ "nodes": json(&nodes) })))
}

fn verify_blaschke(f: &StandardFunction, args: &Args) -> Result<Outcome, Failure> {
    let b = f.blaschke();
    let zeros: Vec<(UnitDiskPoint, u32)> = b.zeros().to_vec();
    let real = realize_blaschke(&zeros)?;
    let normalized = skappa::model::BlaschkeProduct::normalized(zeros.clone())?;
    let mut rng = seed::rng(args.seed, &[0x42]);
    let mut eval_err = 0.0f64;
    let mut kernel = 0.0f64;
    let samples: Vec<C64> = (0..200).map(|_| Region::WholeDisk.sample(&mut rng)).collect();
    for (i, &z) in samples.iter().enumerate() {
        let exact = normalized.eval(z);
        eval_err = eval_err.max((real.eval(z) - exact).norm() / exact.norm().max(1e-300).max(1.0));
        kernel = kernel.max(real.kernel_residual(z, samples[(i + 1) % samples.len()]));
    }
    let degree = real.winding_number(0.999, 4096);
    let checks = vec![
        Check { check: "product_agreement", value: eval_err, limit: 1e-10, pass: eval_err <= 1e-10 },
        Check { check: "kernel_identity", value: kernel, limit: 1e-10, pass: kernel <= 1e-10 },
        Check {
            check: "degree",
            value: degree as f64,
            limit: real.degree() as f64,
            pass: degree == real.degree() as i64,
        },
    ];
    Ok(checks_outcome(checks, serde_json::json!({ "degree": real.degree() })))
}

fn hindmarsh(f: &StandardFunction, args: &Args) -> Result<Outcome, Failure> {
    let out = hindmarsh_test(f, &args.region, args.triples, args.seed)?;
    let mut csv = String::from("verdict,triples_tested,z1,z2,z3,eigenvalue\n");
    match &out {
        HindmarshOutcome::ConsistentWithSchur { triples_tested } => {
            writeln!(csv, "consistent,{triples_tested},,,,").unwrap();
        }
        HindmarshOutcome::Violation { triple, eigenvalue, triples_tested } => {
            writeln!(
                csv,
                "violation,{triples_tested},{},{},{},{eigenvalue:.16e}",
                fmt_c(triple[0]),
                fmt_c(triple[1]),
                fmt_c(triple[2])
            )
            .unwrap();
        }
    }
    Ok(Outcome { csv, structured: json(&out), status: Status::Ok })
}

fn run(args: &Args) -> Result<Status, Failure> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", args.spec.display())))?;
    let spec = FunctionSpec::from_json(&text)?;
    let f = spec.build()?;
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(Failure::Validation(format!("tolerance must be positive, got {}", args.tol)));
    }
    let policy = TolerancePolicy::Relative(args.tol);
    let outcome = match args.command {
        Command::Profile => profile(&f, args, policy)?,
        Command::Classify => classify(&f, args, policy)?,
        Command::Witness => witness(&f, args)?,
        Command::VerifyTheta => verify_theta(&f, args)?,
        Command::VerifyBlaschke => verify_blaschke(&f, args)?,
        Command::Hindmarsh => hindmarsh(&f, args)?,
    };
    let body = match args.format {
        Format::Csv => outcome.csv,
        Format::Structured => serde_json::to_string_pretty(&outcome.structured).expect("json") + "\n",
    };
    match &args.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Other(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Numerical) => {
            eprintln!("numerical contract violated");
            ExitCode::from(3)
        }
        Ok(Status::Inconclusive) => {
            eprintln!("inconclusive");
            ExitCode::from(4)
        }
        Err(Failure::Validation(m)) => {
            eprintln!("invalid input: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
