//! `seqrec`: evaluate sequences, fit and verify recursion schemes, search,
//! refute, derive strong schemes from automata and check synchronized
//! machines. Every subcommand but `eval` writes one JSON document to
//! stdout (or `--out`) and a short summary to stderr.
//!
//! Exit codes: 0 verified or found, 1 counterexample, no solution or
//! exhausted, 2 usage error.

mod report;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use seqrec::corpus::{OracleSpec, SequenceOracle};
use seqrec::dfao::Dfao;
use seqrec::recsolve::{
    fit, refute_g_general, refute_g_strong, refute_h_strong, search, verify_jobs, Certificate,
    Claim, FitOutcome, Outcome, RecError, RecursionScheme, SchemeShape, SearchBounds, SearchMode,
};
use seqrec::strongderive::{derive, verify_mapping, SubsequenceMapping};
use seqrec::syncverify::{
    build_fig2, build_figk, build_identity, build_tm, repr_pattern_check, verify_sync, SyncDfa,
};

#[derive(Parser, Debug)]
#[command(
    name = "seqrec",
    version,
    about = "Exact experiments with k-recursive sequences"
)]
struct Cli {
    /// Worker threads for verification. Results do not depend on it.
    #[arg(long, global = true, env = "SEQREC_JOBS", default_value_t = 1)]
    jobs: usize,

    /// Write the JSON document to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print `n value` for each n in a range.
    Eval(EvalArgs),
    /// Fit a scheme of a given shape, then verify it.
    Fit(FitArgs),
    /// Verify a scheme read from a JSON file.
    Verify(VerifyArgs),
    /// Enumerate shapes until one fits and verifies.
    Search(SearchArgs),
    /// Reproduce a finite refutation for g or h.
    Refute(RefuteArgs),
    /// Derive and verify subsequence equalities from an lsd-first DFAO.
    DeriveStrong(DeriveArgs),
    /// Check a two-track automaton against a sequence.
    SyncVerify(SyncArgs),
    /// Collect per-class evidence for a built-in sequence.
    Report(report::ReportArgs),
}

/// `lo..hi` (inclusive) or a single `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| format!("malformed range {s:?}, expected lo..hi"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b)?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(NRange { lo, hi })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Args, Debug, Clone)]
struct OracleArgs {
    /// Built-in sequence: g, s, tm, tmfc, h, d, id.
    #[arg(long, conflicts_with = "dfao")]
    seq: Option<String>,
    /// Sequence given by an automaton file.
    #[arg(long)]
    dfao: Option<PathBuf>,
    /// Second parameter of g.
    #[arg(long)]
    ell: Option<u32>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    n: NRange,
}

#[derive(Args, Debug)]
struct ShapeArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    t: u32,
    #[arg(long = "L", allow_hyphen_values = true)]
    lower: i64,
    #[arg(long = "U", allow_hyphen_values = true)]
    upper: i64,
    #[arg(long, default_value_t = 0)]
    n0: u64,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long)]
    train: NRange,
    #[arg(long, default_value = "0..10000")]
    verify: NRange,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    /// A scheme, or a document with a `scheme` field.
    #[arg(long)]
    scheme: PathBuf,
    #[arg(long, default_value = "0..10000")]
    range: NRange,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 3)]
    max_t: u32,
    #[arg(long, default_value_t = 8)]
    max_band: u32,
    #[arg(long, default_value = "general")]
    mode: SearchMode,
    #[arg(long, default_value_t = 64)]
    train_len: u64,
    #[arg(long, default_value_t = 10_000)]
    verify_max: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    G,
    H,
}

#[derive(Args, Debug)]
struct RefuteArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    t: u32,
    /// With `--U`, refute the general window `[L, U)` instead of the
    /// strong two-generator form.
    #[arg(long = "L", allow_hyphen_values = true, requires = "upper")]
    lower: Option<i64>,
    #[arg(long = "U", allow_hyphen_values = true, requires = "lower")]
    upper: Option<i64>,
}

#[derive(Args, Debug)]
struct DeriveArgs {
    #[arg(long)]
    dfao: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    verify_n: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Machine {
    Fig2,
    Figk,
    Identity,
    Tm,
}

#[derive(Args, Debug)]
struct SyncArgs {
    #[arg(
        long,
        value_enum,
        conflicts_with = "machine_file",
        required_unless_present = "machine_file"
    )]
    machine: Option<Machine>,
    /// A machine in the pair text format.
    #[arg(long)]
    machine_file: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Checked sequence; defaults to the one the machine is built for.
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long, default_value_t = 10_000)]
    n_max: u64,
    #[arg(long, default_value_t = 4)]
    negatives: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also check the digit pattern 10…01 of g_{k,k}.
    #[arg(long)]
    repr_pattern: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// Something failed after the arguments were accepted.
    Failed(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<RecError> for CliError {
    fn from(e: RecError) -> Self {
        match e {
            RecError::Parameter(_) => CliError::Usage(e.to_string()),
            RecError::Refutation(_) => CliError::Failed(e.to_string()),
        }
    }
}

/// Whether the command's claim came out positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
}

impl Verdict {
    fn of(cert: &Certificate) -> Self {
        if cert.is_verified() {
            Verdict::Positive
        } else {
            Verdict::Negative
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        if self == Verdict::Positive && other == Verdict::Positive {
            Verdict::Positive
        } else {
            Verdict::Negative
        }
    }
}

pub struct Ctx {
    jobs: usize,
    out: Option<PathBuf>,
}

impl Ctx {
    fn emit<T: Serialize>(&self, doc: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
        text.push('\n');
        match &self.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Failed(e.to_string())),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_dfao(path: &Path) -> Result<Dfao, CliError> {
    read(path)?
        .parse::<Dfao>()
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

impl OracleArgs {
    fn is_given(&self) -> bool {
        self.seq.is_some() || self.dfao.is_some()
    }

    fn build(&self, k: Option<u32>) -> Result<Box<dyn SequenceOracle>, CliError> {
        if let Some(path) = &self.dfao {
            return Ok(Box::new(load_dfao(path)?));
        }
        let name = self
            .seq
            .as_deref()
            .ok_or_else(|| usage("one of --seq or --dfao is required"))?;
        spec(name, k, self.ell).build().map_err(usage)
    }
}

/// Only the parameters a sequence actually takes end up in its name.
fn spec(name: &str, k: Option<u32>, ell: Option<u32>) -> OracleSpec {
    let mut spec = OracleSpec::new(name);
    if matches!(name, "g" | "s") {
        if let Some(k) = k {
            spec = spec.with("k", k as i64);
        }
    }
    if name == "g" {
        if let Some(ell) = ell {
            spec = spec.with("ell", ell as i64);
        }
    }
    spec
}

#[derive(Serialize)]
struct SchemeDoc<'a> {
    scheme: Option<&'a RecursionScheme>,
    certificate: &'a Certificate,
}

fn summarize(cert: &Certificate) {
    let range = cert
        .range
        .map(|[lo, hi]| format!(" on {lo}..{hi}"))
        .unwrap_or_default();
    let vacuous = if cert.vacuous { " (vacuous)" } else { "" };
    eprintln!("{}{range}{vacuous}", cert.status());
    if let Some(cx) = cert.counterexample() {
        eprintln!(
            "counterexample: {}",
            serde_json::to_string(cx).expect("serializes")
        );
    }
    if let Some(ns) = cert.no_solution() {
        for eq in &ns.equations {
            eprintln!("  {eq}");
        }
    }
}

fn cmd_eval(a: EvalArgs) -> Result<Verdict, CliError> {
    let oracle = a.oracle.build(a.k)?;
    let len = usize::try_from(a.n.hi)
        .ok()
        .and_then(|h| h.checked_add(1))
        .ok_or_else(|| usage("range too large"))?;
    let values = if a.n.lo == 0 {
        oracle.table(len)
    } else {
        (a.n.lo..=a.n.hi).map(|n| oracle.eval(n)).collect()
    };
    let offset = if a.n.lo == 0 { 0 } else { a.n.lo };
    let mut out = String::new();
    for n in a.n.lo..=a.n.hi {
        out.push_str(&format!("{n} {}\n", values[(n - offset) as usize]));
    }
    std::io::stdout()
        .write_all(out.as_bytes())
        .map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(Verdict::Positive)
}

fn scheme_claim(oracle: &dyn SequenceOracle, s: &SchemeShape) -> Claim {
    Claim::Scheme {
        oracle: oracle.name(),
        k: s.k,
        r: s.r,
        t: s.t,
        lower: s.lower,
        upper: s.upper,
        n0: s.n0,
    }
}

fn cmd_fit(a: FitArgs, ctx: &Ctx) -> Result<Verdict, CliError> {
    let s = &a.shape;
    let shape = SchemeShape::new(s.k, s.r, s.t, s.lower, s.upper, s.n0)?;
    let oracle = a.oracle.build(Some(s.k))?;
    match fit(&oracle, shape, (a.train.lo, a.train.hi))? {
        FitOutcome::Fitted { scheme, pinned } => {
            let mut cert = verify_jobs(&oracle, &scheme, a.verify.lo..=a.verify.hi, ctx.jobs)
                .note(format!("fitted on n in {}", a.train));
            if !pinned.is_empty() {
                cert = cert.note(format!(
                    "free coefficients pinned to 0 (residue, offsets): {pinned:?}"
                ));
            }
            eprintln!("{scheme}");
            summarize(&cert);
            ctx.emit(&SchemeDoc {
                scheme: Some(&scheme),
                certificate: &cert,
            })?;
            Ok(Verdict::of(&cert))
        }
        FitOutcome::NoSolution(ns) => {
            let cert = Certificate::new(scheme_claim(&oracle, &shape), Outcome::NoSolution(ns))
                .with_range(a.train.lo, a.train.hi);
            summarize(&cert);
            ctx.emit(&SchemeDoc {
                scheme: None,
                certificate: &cert,
            })?;
            Ok(Verdict::Negative)
        }
    }
}

fn cmd_verify(a: VerifyArgs, ctx: &Ctx) -> Result<Verdict, CliError> {
    let text = read(&a.scheme)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", a.scheme.display())))?;
    let inner = match value.get("scheme") {
        Some(s) => s.clone(),
        None => value,
    };
    let scheme: RecursionScheme =
        serde_json::from_value(inner).map_err(|e| usage(format!("{}: {e}", a.scheme.display())))?;
    let oracle = a.oracle.build(Some(scheme.shape().k))?;
    let cert = verify_jobs(&oracle, &scheme, a.range.lo..=a.range.hi, ctx.jobs);
    summarize(&cert);
    ctx.emit(&SchemeDoc {
        scheme: Some(&scheme),
        certificate: &cert,
    })?;
    Ok(Verdict::of(&cert))
}

fn cmd_search(a: SearchArgs, ctx: &Ctx) -> Result<Verdict, CliError> {
    let oracle = a.oracle.build(Some(a.k))?;
    let mut bounds = SearchBounds::new(a.k, a.max_t, a.max_band, a.mode);
    bounds.train_len = a.train_len;
    bounds.verify_max = a.verify_max;
    let res = search(&oracle, bounds)?;
    if let Some(s) = &res.scheme {
        eprintln!("{s}");
    }
    summarize(&res.certificate);
    ctx.emit(&SchemeDoc {
        scheme: res.scheme.as_ref(),
        certificate: &res.certificate,
    })?;
    Ok(Verdict::of(&res.certificate))
}

#[derive(Serialize)]
struct CertDoc<'a> {
    certificate: &'a Certificate,
}

fn cmd_refute(a: RefuteArgs, ctx: &Ctx) -> Result<Verdict, CliError> {
    let cert = match a.family {
        Family::G => {
            let k = a.k.ok_or_else(|| usage("refute --family g needs --k"))?;
            let ell = a
                .ell
                .ok_or_else(|| usage("refute --family g needs --ell"))?;
            match (a.lower, a.upper) {
                (Some(l), Some(u)) => refute_g_general(k, ell, a.r, a.t, l, u)?,
                _ => refute_g_strong(k, ell, a.r, a.t)?,
            }
        }
        Family::H => {
            if a.lower.is_some() || a.k.is_some_and(|k| k != 3) {
                return Err(usage(
                    "refute --family h takes only --r and --t (base 3, strong form)",
                ));
            }
            refute_h_strong(a.r, a.t)?
        }
    };
    summarize(&cert);
    ctx.emit(&CertDoc { certificate: &cert })?;
    Ok(Verdict::Negative)
}

#[derive(Serialize)]
struct MappingDoc<'a> {
    #[serde(flatten)]
    mapping: &'a SubsequenceMapping,
    certificate: &'a Certificate,
}

fn cmd_derive(a: DeriveArgs, ctx: &Ctx) -> Result<Verdict, CliError> {
    let dfao = load_dfao(&a.dfao)?;
    let mapping = derive(&dfao).map_err(|e| usage(format!("{}: {e}", a.dfao.display())))?;
    let cert = verify_mapping(&dfao, &mapping, a.verify_n, ctx.jobs);
    let (k, r, t) = (mapping.k() as u64, mapping.r(), mapping.t());
    eprintln!("(r, t) = ({r}, {t})");
    for (b, a) in mapping.map().iter().enumerate() {
        eprintln!("f({}n+{b}) = f({}n+{a})", k.pow(t), k.pow(r));
    }
    summarize(&cert);
    ctx.emit(&MappingDoc {
        mapping: &mapping,
        certificate: &cert,
    })?;
    Ok(Verdict::of(&cert))
}

#[derive(Serialize)]
struct SyncDoc<'a> {
    machine: &'a str,
    certificate: &'a Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    repr_pattern: Option<&'a Certificate>,
}

fn cmd_sync(a: SyncArgs, ctx: &Ctx) -> Result<Verdict, CliError> {
    if a.repr_pattern && !matches!(a.machine, Some(Machine::Fig2 | Machine::Figk)) {
        return Err(usage(
            "--repr-pattern applies to the fig2 and figk machines",
        ));
    }
    let (dfa, default): (SyncDfa, Option<OracleSpec>) = match (a.machine, &a.machine_file) {
        (Some(Machine::Fig2), _) => {
            if a.k != 2 {
                return Err(usage("the fig2 machine is for k = 2; use --machine figk"));
            }
            (build_fig2(), Some(spec("g", Some(2), Some(2))))
        }
        (Some(Machine::Figk), _) => (
            build_figk(a.k).map_err(usage)?,
            Some(spec("g", Some(a.k), Some(a.k))),
        ),
        (Some(Machine::Identity), _) => (
            build_identity(a.k).map_err(usage)?,
            Some(OracleSpec::new("id")),
        ),
        (Some(Machine::Tm), _) => (build_tm(), Some(OracleSpec::new("tm"))),
        (None, Some(path)) => {
            let dfa = SyncDfa::parse(&read(path)?)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?
                .with_name(&path.display().to_string());
            (dfa, None)
        }
        (None, None) => return Err(usage("one of --machine or --machine-file is required")),
    };
    let oracle = if a.oracle.is_given() {
        a.oracle.build(Some(dfa.base()))?
    } else {
        default
            .ok_or_else(|| usage("--machine-file needs --seq or --dfao"))?
            .build()
            .map_err(usage)?
    };
    let cert = verify_sync(&dfa, &oracle, a.n_max, a.negatives, a.seed, ctx.jobs);
    summarize(&cert);
    let pattern = if a.repr_pattern {
        let p = repr_pattern_check(dfa.base(), a.n_max).map_err(usage)?;
        eprint!("digit pattern: ");
        summarize(&p);
        Some(p)
    } else {
        None
    };
    ctx.emit(&SyncDoc {
        machine: dfa.name(),
        certificate: &cert,
        repr_pattern: pattern.as_ref(),
    })?;
    let verdict = Verdict::of(&cert);
    Ok(match &pattern {
        Some(p) => verdict.and(Verdict::of(p)),
        None => verdict,
    })
}

fn run(cli: Cli) -> Result<Verdict, CliError> {
    let ctx = Ctx {
        jobs: cli.jobs.max(1),
        out: cli.out,
    };
    match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Fit(a) => cmd_fit(a, &ctx),
        Command::Verify(a) => cmd_verify(a, &ctx),
        Command::Search(a) => cmd_search(a, &ctx),
        Command::Refute(a) => cmd_refute(a, &ctx),
        Command::DeriveStrong(a) => cmd_derive(a, &ctx),
        Command::SyncVerify(a) => cmd_sync(a, &ctx),
        Command::Report(a) => report::cmd_report(a, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Positive) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
