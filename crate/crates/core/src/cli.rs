//! Command-line front end.
//!
//! Exit codes: 0 when every case holds, 1 when some case fails, 2 for usage
//! or parameter errors. Reports go to stdout (JSON by default, CSV with
//! `--format csv`), diagnostics to stderr. `MZV_THREADS` caps the worker
//! pool.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{bernoulli, beta, converge_report, s_closed, s_star_closed};
use crate::harmonic::{
    build_frs, build_frt, harmonic_mul, verify_frs_symbolic, verify_frt_symbolic, z_m_eval,
};
use crate::series::{check_gen_identity, check_symmetric_form, default_bounds, Bounds};
use crate::store::ZetaStore;
use crate::zeta::{sum_direct, verify_identity_grid, zeta_values_at, Span, SumKind};
use crate::{rational_string, AbcParams, Index, MzvError, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mzv", version, about = "Exact truncated multiple zeta(-star) values and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an identity over a grid of cases
    Verify(VerifyArgs),
    /// Print one exact value
    Eval(EvalArgs),
    /// Tabulate s★_m(p,q)/π^{4p+2q} against its limit, (a,b,c) = (3,1,2)
    Converge(ConvergeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    SIdentity,
    TIdentity,
    Gen,
    Symmetric,
    Frs,
    Frt,
    Homomorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    kind: VerifyKind,
    /// Parameter triple a,b,c with a+b=2c and a≥2
    #[arg(long, default_value = "3,1,2")]
    abc: String,
    /// Range lo..hi (inclusive) or a single value
    #[arg(long, default_value = "0..2")]
    p: String,
    #[arg(long, default_value = "0..2")]
    q: String,
    #[arg(long, default_value = "0..10")]
    m: String,
    /// Truncation bounds bx,by for gen/symmetric; defaults to (2P+1, Q)
    #[arg(long)]
    bounds: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Added to C(k+l,k) in the s/t identities. Test hook for the failure path.
    #[arg(long, hide = true, default_value_t = 0, allow_negative_numbers = true)]
    corrupt_coefficient: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EvalKind {
    Zeta,
    ZetaStar,
    S,
    SStar,
    T,
    TStar,
    Bernoulli,
    Beta,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClosedKind {
    S,
    SStar,
}

#[derive(Debug, clap::Args)]
struct EvalArgs {
    kind: EvalKind,
    /// Comma separated index, e.g. 3,1 (empty for ∅)
    #[arg(long, allow_hyphen_values = true)]
    index: Option<String>,
    #[arg(long, default_value_t = 0)]
    m: u64,
    #[arg(long, default_value_t = 0)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    q: usize,
    #[arg(long, default_value = "3,1,2")]
    abc: String,
    /// Bernoulli index
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// β index
    #[arg(long, default_value_t = 0)]
    r: usize,
    /// Which closed form for `eval closed`
    #[arg(long = "kind", value_enum, default_value = "s")]
    closed_kind: ClosedKind,
    /// Persist truncated values in this file
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct ConvergeArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// Strictly increasing comma separated schedule, e.g. 10,100,1000
    #[arg(long)]
    m: String,
    /// Persist truncated values in this file
    #[arg(long)]
    cache: Option<PathBuf>,
}

/// Parameters echoed in a [`RunReport`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReportParams {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub p: Option<[u64; 2]>,
    pub q: Option<[u64; 2]>,
    pub m: Option<[u64; 2]>,
    pub bounds: Option<[usize; 2]>,
}

/// One checked case. Rationals are `n/d` strings; for polynomial identities
/// `lhs` and `rhs` hold the rendered polynomials.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CaseRecord {
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub m: Option<u64>,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RunReport {
    pub command: String,
    pub params: ReportParams,
    pub cases: Vec<CaseRecord>,
    pub all_passed: bool,
    pub elapsed_ms: u64,
}

fn usage(msg: impl std::fmt::Display) -> MzvError {
    MzvError::Parse(msg.to_string())
}

/// `lo..hi` (inclusive) or a single value.
pub fn parse_span(s: &str) -> Result<Span, MzvError> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| usage(format!("bad range bound {t:?} (expected a non-negative integer)")))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if hi < lo {
        return Err(usage(format!("empty range {s:?}")));
    }
    Ok(lo..=hi)
}

fn parse_bounds(s: &str) -> Result<Bounds, MzvError> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| usage(format!("bounds must look like bx,by, got {s:?}")))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|_| usage(format!("bad bound {t:?}")));
    Ok((n(x)?, n(y)?))
}

fn parse_schedule(s: &str) -> Result<Vec<u64>, MzvError> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| usage(format!("bad m value {t:?}"))))
        .collect()
}

fn kind_name(kind: VerifyKind) -> &'static str {
    match kind {
        VerifyKind::SIdentity => "s-identity",
        VerifyKind::TIdentity => "t-identity",
        VerifyKind::Gen => "gen",
        VerifyKind::Symmetric => "symmetric",
        VerifyKind::Frs => "frs",
        VerifyKind::Frt => "frt",
        VerifyKind::Homomorphism => "homomorphism",
    }
}

fn pair(s: &Span) -> [u64; 2] {
    [*s.start(), *s.end()]
}

fn grid(ps: &Span, qs: &Span, ms: Option<&Span>) -> Vec<(usize, usize, Option<u64>)> {
    let mut out = Vec::new();
    for p in ps.clone() {
        for q in qs.clone() {
            match ms {
                Some(ms) => out.extend(ms.clone().map(|m| (p as usize, q as usize, Some(m)))),
                None => out.push((p as usize, q as usize, None)),
            }
        }
    }
    out
}

/// Run `verify` and build its report.
fn run_verify(args: &VerifyArgs) -> Result<RunReport, MzvError> {
    let started = Instant::now();
    let params: AbcParams = args.abc.parse()?;
    let (ps, qs, ms) = (parse_span(&args.p)?, parse_span(&args.q)?, parse_span(&args.m)?);
    let bounds = match &args.bounds {
        Some(b) => parse_bounds(b)?,
        None => default_bounds(*ps.end() as usize, *qs.end() as usize),
    };

    let mut report_params = ReportParams {
        a: params.a(),
        b: params.b(),
        c: params.c(),
        p: Some(pair(&ps)),
        q: Some(pair(&qs)),
        m: Some(pair(&ms)),
        bounds: None,
    };

    let cases: Vec<CaseRecord> = match args.kind {
        VerifyKind::SIdentity | VerifyKind::TIdentity => {
            let kind = if args.kind == VerifyKind::SIdentity { SumKind::S } else { SumKind::T };
            verify_identity_grid(kind, &params, ps, qs, ms, args.corrupt_coefficient)
                .into_iter()
                .map(|r| CaseRecord {
                    p: Some(r.p),
                    q: Some(r.q),
                    m: Some(r.m),
                    lhs: rational_string(&r.lhs),
                    rhs: rational_string(&r.rhs),
                    equal: r.equal,
                })
                .collect()
        }
        VerifyKind::Gen | VerifyKind::Symmetric => {
            report_params.p = None;
            report_params.q = None;
            report_params.bounds = Some([bounds.0, bounds.1]);
            let check = if args.kind == VerifyKind::Gen { check_gen_identity } else { check_symmetric_form };
            let ms: Vec<u64> = ms.collect();
            ms.par_iter()
                .map(|&m| {
                    let r = check(m, &params, bounds);
                    CaseRecord {
                        p: None,
                        q: None,
                        m: Some(m),
                        lhs: r.lhs.to_string(),
                        rhs: r.rhs.to_string(),
                        equal: r.equal,
                    }
                })
                .collect()
        }
        VerifyKind::Frs | VerifyKind::Frt => {
            report_params.m = None;
            let check = if args.kind == VerifyKind::Frs { verify_frs_symbolic } else { verify_frt_symbolic };
            grid(&ps, &qs, None)
                .par_iter()
                .map(|&(p, q, _)| {
                    let r = check(p, q, &params);
                    CaseRecord {
                        p: Some(p),
                        q: Some(q),
                        m: None,
                        lhs: r.lhs.to_string(),
                        rhs: r.rhs.to_string(),
                        equal: r.equal,
                    }
                })
                .collect()
        }
        VerifyKind::Homomorphism => grid(&ps, &qs, Some(&ms))
            .par_iter()
            .map(|&(p, q, m)| {
                let m = m.expect("m present");
                let (u, v) = (build_frs(p, q, &params), build_frt(p, q, &params));
                let lhs = z_m_eval(&harmonic_mul(&u, &v), m);
                let rhs = z_m_eval(&u, m) * z_m_eval(&v, m);
                CaseRecord {
                    p: Some(p),
                    q: Some(q),
                    m: Some(m),
                    equal: lhs == rhs,
                    lhs: rational_string(&lhs),
                    rhs: rational_string(&rhs),
                }
            })
            .collect(),
    };

    let all_passed = cases.iter().all(|c| c.equal);
    Ok(RunReport {
        command: format!("verify {}", kind_name(args.kind)),
        params: report_params,
        cases,
        all_passed,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

fn write_report(report: &RunReport, format: Format, out: &mut dyn Write) -> Result<(), MzvError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)
                .map_err(|e| MzvError::Io(e.into()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let io = |e: csv::Error| MzvError::Io(std::io::Error::other(e));
            w.write_record(["p", "q", "m", "lhs", "rhs", "equal"]).map_err(io)?;
            let opt = |v: Option<String>| v.unwrap_or_default();
            for c in &report.cases {
                w.write_record([
                    opt(c.p.map(|v| v.to_string())),
                    opt(c.q.map(|v| v.to_string())),
                    opt(c.m.map(|v| v.to_string())),
                    c.lhs.clone(),
                    c.rhs.clone(),
                    c.equal.to_string(),
                ])
                .map_err(io)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn print_value(out: &mut dyn Write, v: &Rational) -> std::io::Result<()> {
    writeln!(out, "{}", rational_string(v))?;
    writeln!(out, "{}", v.to_f64().unwrap_or(f64::NAN))
}

fn run_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32, MzvError> {
    match args.kind {
        EvalKind::Zeta | EvalKind::ZetaStar => {
            let text = args
                .index
                .as_deref()
                .ok_or_else(|| usage("--index is required"))?;
            let k: Index = text.parse()?;
            let star = args.kind == EvalKind::ZetaStar;
            let mut store = args.cache.as_deref().map(ZetaStore::open).transpose()?;
            let value = match store.as_ref().and_then(|s| s.get(&k, star, args.m)) {
                Some(v) => v.clone(),
                None => zeta_values_at(&k, star, &[args.m]).remove(0),
            };
            if let (Some(st), Some(path)) = (store.as_mut(), args.cache.as_deref()) {
                st.insert(&k, star, args.m, value.clone());
                st.save(path)?;
            }
            print_value(out, &value)?;
        }
        EvalKind::S | EvalKind::SStar | EvalKind::T | EvalKind::TStar => {
            let params: AbcParams = args.abc.parse()?;
            let kind = match args.kind {
                EvalKind::S => SumKind::S,
                EvalKind::SStar => SumKind::SStar,
                EvalKind::T => SumKind::T,
                _ => SumKind::TStar,
            };
            print_value(out, &sum_direct(kind, args.p, args.q, args.m, &params))?;
        }
        EvalKind::Bernoulli => print_value(out, &bernoulli(args.n))?,
        EvalKind::Beta => print_value(out, &beta(args.r))?,
        EvalKind::Closed => {
            let c = match args.closed_kind {
                ClosedKind::S => s_closed(args.p, args.q),
                ClosedKind::SStar => s_star_closed(args.p, args.q),
            };
            writeln!(out, "{c}")?;
            writeln!(out, "{}", c.to_f64())?;
        }
    }
    Ok(EXIT_OK)
}

fn run_converge(args: &ConvergeArgs, out: &mut dyn Write) -> Result<i32, MzvError> {
    let schedule = parse_schedule(&args.m)?;
    let mut store = args.cache.as_deref().map(ZetaStore::open).transpose()?;
    let report = converge_report(args.p, args.q, &AbcParams::classic(), &schedule, store.as_mut())?;
    if let (Some(st), Some(path)) = (store.as_ref(), args.cache.as_deref()) {
        st.save(path)?;
    }
    let io = |e: csv::Error| MzvError::Io(std::io::Error::other(e));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "truncated_over_pi_power", "closed_form", "abs_error"])
        .map_err(io)?;
    for row in &report.rows {
        w.write_record([
            row.m.to_string(),
            format!("{:e}", row.truncated_over_pi_power),
            format!("{:e}", row.closed_form),
            format!("{:e}", row.abs_error),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(if report.is_monotone() { EXIT_OK } else { EXIT_MISMATCH })
}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("MZV_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let pool = thread_pool();
    // the pool needs Send captures, so buffer output and copy it over afterwards
    let (result, buf_out, buf_err) = pool.install(|| {
        let (mut o, mut e): (Vec<u8>, Vec<u8>) = (Vec::new(), Vec::new());
        let result = match &cli.command {
            Command::Verify(args) => run_verify(args).and_then(|report| {
                write_report(&report, args.format, &mut o)?;
                if !report.all_passed {
                    let failed = report.cases.iter().filter(|c| !c.equal).count();
                    let _ = writeln!(e, "{failed} of {} cases failed", report.cases.len());
                }
                Ok(if report.all_passed { EXIT_OK } else { EXIT_MISMATCH })
            }),
            Command::Eval(args) => run_eval(args, &mut o),
            Command::Converge(args) => run_converge(args, &mut o),
        };
        (result, o, e)
    });
    let _ = out.write_all(&buf_out);
    let _ = err.write_all(&buf_err);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
