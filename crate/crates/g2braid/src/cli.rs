//! Command-line front end: `bratteli`, `rep` and `verify`.
//!
//! Exit codes: 0 when everything passed, 1 on a failed check or a solver
//! failure, 2 on a usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::pathlattice::{self, Lattice};
use crate::qscalar::{Backend, EvalAt, Exact};
use crate::repbuilder::{wrap, Instance, JsonScalar, RepSet, Tower, Young, G2};
use crate::verifier::{self, VerifyReport};

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "G2BRAID_WORKERS";

/// Levels up to which `verify` also multiplies out the full twist.
pub const LITERAL_CENTRAL_MAX: usize = 4;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "g2braid", version, about = "Braid group representations on G2 path spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the Bratteli diagram.
    Bratteli(Config),
    /// Build the generator matrices and write them.
    Rep(Config),
    /// Build (or load) the generators and run the selected checks.
    Verify(Config),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InstanceArg {
    G2,
    Young,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Eval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Check {
    Spectrum,
    Braid,
    Central,
    B3,
    Ribbon,
    Generation,
    Projector,
    Rigidity,
    /// Everything above.
    All,
}

const DEFAULT_CHECKS: [Check; 7] = [
    Check::Spectrum,
    Check::Braid,
    Check::Central,
    Check::B3,
    Check::Ribbon,
    Check::Generation,
    Check::Projector,
];

#[derive(clap::Args, Debug, Clone)]
pub struct Config {
    #[arg(long, value_enum, default_value = "g2")]
    pub instance: InstanceArg,
    /// Highest path length N.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Seed for the free gauge choices.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    pub backend: BackendArg,
    /// Rational point q = p/q for the eval backend and the generation check.
    #[arg(long, value_name = "P/Q", default_value = "3/2")]
    pub eval_point: String,
    /// Output format; defaults to json for bratteli and rep, text for verify.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated checks for verify.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub checks: Vec<Check>,
    /// Independent gauge seeds in the rigidity experiment.
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    /// Verify a representation file instead of building one.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

pub fn parse_point(s: &str) -> Result<BigRational, UsageError> {
    let bad = || usage(format!("--eval-point must be a nonzero rational p/q, got {s:?}"));
    let r: BigRational = match s.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse().map_err(|_| bad())?;
            let q: num_bigint::BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == 0.into() {
                return Err(bad());
            }
            BigRational::new(p, q)
        }
        None => BigRational::from_integer(s.trim().parse().map_err(|_| bad())?),
    };
    if r == BigRational::from_integer(0.into()) {
        return Err(bad());
    }
    Ok(r)
}

/// Worker count from the environment; one thread unless set.
pub fn workers_from_env() -> Result<usize, UsageError> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

fn write_output(cfg: &Config, text: &str) -> Result<(), String> {
    match &cfg.out {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

/// Outcome of a command before it is turned into an exit code.
enum Outcome {
    Ok,
    Failed(String),
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    let workers = match workers_from_env() {
        Ok(n) => n,
        Err(UsageError(m)) => {
            eprintln!("error: {m}");
            return EXIT_USAGE;
        }
    };
    // A second call (as in tests running several commands) keeps the
    // existing pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    let result = match &cli.command {
        Command::Bratteli(cfg) => cmd_bratteli(cfg),
        Command::Rep(cfg) => cmd_rep(cfg),
        Command::Verify(cfg) => cmd_verify(cfg),
    };
    match result {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Failed(m)) => {
            if !m.is_empty() {
                eprintln!("{m}");
            }
            EXIT_FAIL
        }
        Err(UsageError(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
    }
}

fn io_fail(r: Result<(), String>) -> Outcome {
    match r {
        Ok(()) => Outcome::Ok,
        Err(e) => Outcome::Failed(format!("error: {e}")),
    }
}

fn cmd_bratteli(cfg: &Config) -> Result<Outcome, UsageError> {
    let n = cfg.levels.unwrap_or(3);
    let text = match cfg.instance {
        InstanceArg::G2 => bratteli_text(&G2, n, cfg.format.unwrap_or(Format::Json)),
        InstanceArg::Young => bratteli_text(&Young, n, cfg.format.unwrap_or(Format::Json)),
    };
    Ok(io_fail(write_output(cfg, &text)))
}

fn bratteli_text<L: Lattice>(lat: &L, n: usize, format: Format) -> String {
    let b = pathlattice::build(lat, n);
    match format {
        Format::Json => b.export_json(lat),
        Format::Dot => b.export_dot(lat),
        Format::Text => {
            let mut s = String::new();
            for (k, lv) in b.levels.iter().enumerate() {
                let row: Vec<String> = lv.iter().map(|(l, m)| format!("{}:{m}", wrap(l))).collect();
                s.push_str(&format!("level {k}: {}\n", row.join(" ")));
            }
            s
        }
    }
}

fn eval_backend(cfg: &Config) -> Result<EvalAt, UsageError> {
    EvalAt::new(parse_point(&cfg.eval_point)?).map_err(|e| usage(e.to_string()))
}

fn cmd_rep(cfg: &Config) -> Result<Outcome, UsageError> {
    let n = cfg.levels.unwrap_or(3);
    let format = cfg.format.unwrap_or(Format::Json);
    if format == Format::Dot {
        return Err(usage("rep supports --format json or text"));
    }
    match (cfg.instance, cfg.backend) {
        (InstanceArg::G2, BackendArg::Exact) => Ok(rep_with(cfg, G2, Exact, n, format)),
        (InstanceArg::G2, BackendArg::Eval) => Ok(rep_with(cfg, G2, eval_backend(cfg)?, n, format)),
        (InstanceArg::Young, BackendArg::Exact) => Ok(rep_with(cfg, Young, Exact, n, format)),
        (InstanceArg::Young, BackendArg::Eval) => Ok(rep_with(cfg, Young, eval_backend(cfg)?, n, format)),
    }
}

fn rep_with<I: Instance, B: Backend>(cfg: &Config, inst: I, be: B, n: usize, format: Format) -> Outcome
where
    B::S: JsonScalar,
{
    let mut tower = Tower::new(inst, be, cfg.seed);
    if let Err(e) = tower.build_to(n) {
        return Outcome::Failed(format!("solver failure: {e}"));
    }
    let rep = tower.rep_set();
    let text = match format {
        Format::Text => rep_text(&rep),
        _ => rep.to_json_string(),
    };
    io_fail(write_output(cfg, &text))
}

fn rep_text<I: Instance, S: JsonScalar>(rep: &RepSet<I, S>) -> String {
    let mut s = format!(
        "instance {} backend {} seed {} levels {}\n",
        rep.inst.name(),
        rep.backend,
        rep.seed,
        rep.max_level()
    );
    for n in 2..=rep.max_level() {
        s.push_str(&format!("\nlevel {n} (sigma_{}):\n", n - 1));
        for b in rep.level_blocks(n) {
            if rep.first_level.get(&(b.delta.clone(), b.lambda.clone())) != Some(&n) {
                continue;
            }
            let mids: Vec<String> = b.middles.iter().map(wrap).collect();
            s.push_str(&format!("  {} paths via {}\n", b.name(), mids.join(" ")));
            for i in 0..b.dim() {
                let row: Vec<String> = (0..b.dim()).map(|j| b.get(i, j).to_string()).collect();
                s.push_str(&format!("    [{}]\n", row.join(", ")));
            }
        }
    }
    s
}

fn options(cfg: &Config, point: &BigRational) -> CheckOptions {
    CheckOptions {
        checks: cfg.checks.clone(),
        trials: cfg.trials,
        seed: cfg.seed,
        point: point.clone(),
    }
}

fn cmd_verify(cfg: &Config) -> Result<Outcome, UsageError> {
    let format = cfg.format.unwrap_or(Format::Text);
    if format == Format::Dot {
        return Err(usage("verify supports --format text or json"));
    }
    let point = parse_point(&cfg.eval_point)?;
    if let Some(path) = &cfg.input {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return Ok(Outcome::Failed(format!("error: cannot read {}: {e}", path.display()))),
        };
        let backend = serde_json::from_str::<serde_json::Value>(&text)
            .ok()
            .and_then(|v| v["backend"].as_str().map(str::to_string))
            .unwrap_or_default();
        return Ok(match (cfg.instance, backend.strip_prefix("eval:")) {
            (InstanceArg::G2, None) => verify_file(cfg, G2, Exact, &text, &point),
            (InstanceArg::Young, None) => verify_file(cfg, Young, Exact, &text, &point),
            (inst, Some(p)) => {
                let be = EvalAt::new(parse_point(p)?).map_err(|e| usage(e.to_string()))?;
                match inst {
                    InstanceArg::G2 => verify_file(cfg, G2, be.clone(), &text, &point),
                    InstanceArg::Young => verify_file(cfg, Young, be, &text, &point),
                }
            }
        });
    }
    Ok(match (cfg.instance, cfg.backend) {
        (InstanceArg::G2, BackendArg::Exact) => verify_built(cfg, G2, Exact, &point),
        (InstanceArg::G2, BackendArg::Eval) => verify_built(cfg, G2, eval_backend(cfg)?, &point),
        (InstanceArg::Young, BackendArg::Exact) => verify_built(cfg, Young, Exact, &point),
        (InstanceArg::Young, BackendArg::Eval) => verify_built(cfg, Young, eval_backend(cfg)?, &point),
    })
}

fn verify_file<I: Instance, B: Backend>(cfg: &Config, inst: I, be: B, text: &str, point: &BigRational) -> Outcome
where
    B::S: JsonScalar + verifier::EvalRep,
{
    let rep = match RepSet::<I, B::S>::from_json(inst, text) {
        Ok(r) => r,
        Err(e) => {
            let r = VerifyReport::fail("load", "input", e.to_string());
            return finish(cfg, vec![r]);
        }
    };
    let n = cfg.levels.unwrap_or(rep.max_level()).min(rep.max_level());
    let reports = run_checks(&rep, &be, n, &options(cfg, point));
    finish(cfg, reports)
}

fn verify_built<I: Instance, B: Backend>(cfg: &Config, inst: I, be: B, point: &BigRational) -> Outcome
where
    B::S: JsonScalar + verifier::EvalRep,
{
    let n = cfg.levels.unwrap_or(4);
    let needs = expand_checks(&cfg.checks);
    let build_to = if needs.iter().any(|c| matches!(c, Check::B3 | Check::Generation)) {
        n.max(3)
    } else {
        n
    };
    let mut tower = Tower::new(inst, be.clone(), cfg.seed);
    if let Err(e) = tower.build_to(build_to) {
        let r = VerifyReport::fail("build", format!("level {build_to}"), format!("solver failure: {e}"));
        return finish(cfg, vec![r]);
    }
    let rep = tower.rep_set();
    let reports = run_checks(&rep, &be, n, &options(cfg, point));
    finish(cfg, reports)
}

/// Options for [`run_checks`] beyond the representation itself.
#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Checks to run; `All` expands to every check including rigidity.
    pub checks: Vec<Check>,
    pub trials: usize,
    pub seed: u64,
    /// Point used to evaluate exact towers for the generation check.
    pub point: BigRational,
}

/// Default check list, or everything for `All`, deduplicated.
pub fn expand_checks(checks: &[Check]) -> Vec<Check> {
    let mut out: Vec<Check> = if checks.is_empty() {
        DEFAULT_CHECKS.to_vec()
    } else if checks.contains(&Check::All) {
        let mut v = DEFAULT_CHECKS.to_vec();
        v.push(Check::Rigidity);
        v
    } else {
        checks.to_vec()
    };
    out.sort();
    out.dedup();
    out
}

/// Runs the selected checks through level n.
pub fn run_checks<I: Instance, B: Backend>(rep: &RepSet<I, B::S>, be: &B, n: usize, opts: &CheckOptions) -> Vec<VerifyReport>
where
    B::S: verifier::EvalRep,
{
    let point = &opts.point;
    let mut out = Vec::new();
    for c in expand_checks(&opts.checks) {
        match c {
            Check::Spectrum => out.extend(verifier::check_spectrum(rep, be, n)),
            Check::Braid => out.extend(verifier::check_braid(rep, n)),
            Check::Central => out.extend(verifier::check_central(rep, be, n, LITERAL_CENTRAL_MAX)),
            Check::B3 => {
                if rep.inst.name() == "g2" {
                    out.extend(verifier::check_b3_scalars(rep, be))
                } else {
                    out.push(VerifyReport::skip("b3", "level 3", "G2 formulas only"));
                }
            }
            Check::Ribbon => {
                if rep.inst.name() == "g2" {
                    out.extend(verifier::check_ribbon_constraints(&rep.inst.channel_data()))
                } else {
                    out.push(VerifyReport::skip("ribbon", "channels", "G2 identities only"));
                }
            }
            Check::Generation => match <B::S as verifier::EvalRep>::eval_rep(rep, point) {
                Ok(r) => out.extend(verifier::check_generation_n3(&r)),
                Err(w) => out.push(VerifyReport::fail("generation", "level 3", w)),
            },
            Check::Projector => out.extend(verifier::check_projectors(rep, be, n)),
            Check::Rigidity => {
                match verifier::rigidity_experiment(&rep.inst, be, n, opts.trials.max(1), opts.seed) {
                    Ok(r) => out.extend(r),
                    Err(e) => out.push(VerifyReport::fail("rigidity", format!("level {n}"), format!("solver failure: {e}"))),
                }
            }
            Check::All => {}
        }
    }
    out
}

fn finish(cfg: &Config, reports: Vec<VerifyReport>) -> Outcome {
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Json => verifier::reports_to_json_lines(&reports),
        _ => verifier::summary_table(&reports),
    };
    if let Err(e) = write_output(cfg, &text) {
        return Outcome::Failed(format!("error: {e}"));
    }
    if verifier::all_passed(&reports) {
        Outcome::Ok
    } else {
        Outcome::Failed(String::new())
    }
}
