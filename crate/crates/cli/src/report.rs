use clap::Args;

use seqrec::report::{build_report, ReportConfig, ReportError};

use super::{spec, usage, CliError, Ctx, Verdict};

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Built-in sequence: g, s, tm, tmfc, h, d, id.
    #[arg(long)]
    seq: String,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    ell: Option<u32>,
    /// Range for the boundedness check.
    #[arg(long, default_value_t = 100_000)]
    n_max: u64,
    /// Range for machine, relation and search verification.
    #[arg(long, default_value_t = 10_000)]
    check_n: u64,
    #[arg(long, default_value_t = 3)]
    max_t: u32,
    #[arg(long, default_value_t = 8)]
    max_band: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    depth: u32,
}

pub fn cmd_report(a: ReportArgs, ctx: &Ctx) -> Result<Verdict, CliError> {
    let k = match (a.seq.as_str(), a.k) {
        (_, Some(k)) => k,
        ("g", None) => return Err(usage("report --seq g needs --k")),
        ("h", None) => 3,
        _ => 2,
    };
    let mut cfg = ReportConfig::new(spec(&a.seq, Some(k), a.ell), k);
    cfg.n_max = a.n_max;
    cfg.check_n = a.check_n;
    cfg.max_t = a.max_t;
    cfg.max_band = a.max_band;
    cfg.seed = a.seed;
    cfg.depth = a.depth;
    cfg.jobs = ctx.jobs;
    let report = build_report(&cfg).map_err(|e| match e {
        ReportError::Rec(e) => CliError::from(e),
        ReportError::Corpus(e) => usage(e),
    })?;
    eprintln!(
        "{}: values in [{}, {}] for n <= {}",
        report.oracle, report.automatic.min, report.automatic.max, report.automatic.n_max
    );
    for (class, s) in [
        (
            "synchronized",
            serde_json::to_value(report.synchronized.status),
        ),
        (
            "strongly recursive",
            serde_json::to_value(report.strongly_recursive.status),
        ),
        ("recursive", serde_json::to_value(report.recursive.status)),
        ("regular", serde_json::to_value(report.regular.status)),
    ] {
        let s = s.expect("statuses serialize");
        eprintln!("{class}: {}", s.as_str().unwrap_or_default());
    }
    ctx.emit(&report)?;
    Ok(Verdict::Positive)
}
