//! Command-line front end. `run` returns the process exit code.

pub mod config;

use crate::bohr::{corollary3_sum, enumerate_h, enumerate_k, lemma2_check, BohrQuery, Mode};
use crate::construction::{
    certify_pair, deepen, estimate_work, extract_witness, lemma4_sweep, run_trace, ConstructionParams, Trace,
};
use crate::dyadic::DyadicInterval;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::Config;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_EMPTY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "badapprox", version, about = "Weighted badly approximable pairs: Bohr sets, dyadic removals, witnesses")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output files
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Maximum enclosure precision in bits
    #[arg(long = "precision-cap", global = true)]
    precision_cap: Option<u32>,
    /// Maximum estimated removal segments per stage
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Naive,
    Fast,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetKind {
    H,
    K,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LemmaKind {
    Lemma2,
    Cor3,
    Lemma4,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate H(p, q] or K(p, q] for the configured ξ and δ
    Bohr {
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "k")]
        set: SetKind,
    },
    /// Sweep one of the counting lemmas and emit CSV rows
    Lemma {
        #[arg(long, value_enum)]
        which: LemmaKind,
        /// Exponents to sweep (repeatable); defaults depend on the lemma
        #[arg(long)]
        beta: Vec<String>,
        /// Largest p (cor3) or largest power of two (lemma2)
        #[arg(long)]
        p_max: Option<u64>,
        /// Sampled x per stage (lemma4)
        #[arg(long, default_value_t = 20)]
        samples: u64,
    },
    /// Run the nested construction and extract a witness interval
    Construct {
        #[arg(long)]
        nu_max: Option<usize>,
    },
    /// Certify a witness interval against the configured pair conditions
    Certify {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        up_to: Option<u64>,
    },
    /// Print the schedule and its work estimate
    Schedule {
        #[arg(long)]
        nu_max: Option<usize>,
    },
}

/// On-disk form of an extracted witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub numerator: u128,
    pub level: u32,
    pub lo: String,
    pub hi: String,
    pub verified_up_to: u64,
}

impl WitnessFile {
    pub fn new(seg: &DyadicInterval, verified_up_to: u64) -> Self {
        Self {
            numerator: seg.numerator,
            level: seg.level,
            lo: format_rational(&seg.lo()),
            hi: format_rational(&seg.hi()),
            verified_up_to,
        }
    }

    pub fn interval(&self) -> Result<DyadicInterval> {
        let seg = DyadicInterval::new(self.numerator, self.level)?;
        if parse_rational(&self.lo)? != seg.lo() || parse_rational(&self.hi)? != seg.hi() {
            return Err(Error::Parse(format!("lo/hi do not match segment {seg}")));
        }
        Ok(seg)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible { .. } => EXIT_INFEASIBLE,
        Error::EmptySurvivor { .. } => EXIT_EMPTY,
        _ => EXIT_USAGE,
    }
}

struct Ctx {
    config: Config,
    out: Option<PathBuf>,
    mode: Mode,
}

impl Ctx {
    fn params(&self) -> Result<ConstructionParams> {
        Ok(self.config.params()?.with_mode(self.mode))
    }

    fn write(&self, name: &str, contents: &str) -> Result<Option<PathBuf>> {
        let Some(dir) = &self.out else { return Ok(None) };
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        Ok(Some(path))
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let g = cli.global;
    let mut config = match &g.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(bits) = g.precision_cap {
        config.precision_cap_bits = bits;
    }
    if let Some(b) = g.budget {
        config.work_budget = b;
    }
    let mode = match g.mode {
        Some(ModeArg::Naive) => Mode::Naive,
        Some(ModeArg::Fast) | None => Mode::Accelerated,
    };
    let ctx = Ctx { config, out: g.out, mode };
    match cli.command {
        Command::Bohr { beta, p, q, set } => cmd_bohr(&ctx, &beta, p, q, set),
        Command::Lemma { which, beta, p_max, samples } => cmd_lemma(&ctx, which, &beta, p_max, samples),
        Command::Construct { nu_max } => cmd_construct(ctx, nu_max),
        Command::Certify { witness, up_to } => cmd_certify(&ctx, &witness, up_to),
        Command::Schedule { nu_max } => cmd_schedule(ctx, nu_max),
    }
}

fn cmd_bohr(ctx: &Ctx, beta: &str, p: u64, q: u64, set: SetKind) -> Result<i32> {
    let mut query = BohrQuery::new(ctx.config.xi()?, parse_rational(beta)?, ctx.config.delta()?, p, q);
    query.cap_bits = ctx.config.precision_cap_bits;
    let (name, result) = match set {
        SetKind::H => ("H", enumerate_h(&query, ctx.mode)?),
        SetKind::K => ("K", enumerate_k(&query, ctx.mode)?),
    };
    let json = serde_json::json!({
        "set": name,
        "beta": format_rational(&query.beta),
        "delta": format_rational(&query.delta),
        "p": p,
        "q": q,
        "mode": match result.mode { Mode::Naive => "naive", Mode::Accelerated => "fast" },
        "members": result.members,
        "conservative_count": result.conservative_count,
    });
    let text = serde_json::to_string_pretty(&json)?;
    println!("{text}");
    ctx.write("bohr.json", &text)?;
    Ok(EXIT_OK)
}

struct LemmaRow {
    lemma: &'static str,
    param: Rational,
    p: u64,
    x: Option<u64>,
    lhs: String,
    rhs_lo: String,
    rhs_hi: String,
    ok: bool,
    note: String,
}

impl LemmaRow {
    fn failed(lemma: &'static str, param: &Rational, p: u64, e: Error) -> Self {
        Self {
            lemma,
            param: param.clone(),
            p,
            x: None,
            lhs: String::new(),
            rhs_lo: String::new(),
            rhs_hi: String::new(),
            ok: false,
            note: e.to_string(),
        }
    }
}

fn parse_list(given: &[String], default: &[Rational]) -> Result<Vec<Rational>> {
    if given.is_empty() {
        return Ok(default.to_vec());
    }
    given.iter().map(|s| parse_rational(s)).collect()
}

fn cmd_lemma(ctx: &Ctx, which: LemmaKind, betas: &[String], p_max: Option<u64>, samples: u64) -> Result<i32> {
    let delta = ctx.config.delta()?;
    let mut rows = Vec::new();
    match which {
        LemmaKind::Lemma2 => {
            let xi = ctx.config.xi()?;
            let betas = parse_list(betas, &[rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)])?;
            let max_exp = p_max.unwrap_or(14).min(62) as u32;
            for beta in &betas {
                for k in 1..=max_exp {
                    let p = 1u64 << k;
                    rows.push(match lemma2_check(&xi, &delta, beta, p) {
                        Ok(r) => LemmaRow {
                            lemma: "lemma2",
                            param: beta.clone(),
                            p,
                            x: None,
                            lhs: r.count.to_string(),
                            rhs_lo: format_rational(&r.bound.lo),
                            rhs_hi: format_rational(&r.bound.hi),
                            ok: r.ok,
                            note: format!("conservative={}", r.conservative_count),
                        },
                        Err(e) => LemmaRow::failed("lemma2", beta, p, e),
                    });
                }
            }
        }
        LemmaKind::Cor3 => {
            let xi = ctx.config.xi()?;
            let betas = parse_list(betas, &[rat(1, 2), rat(1, 1)])?;
            for beta in &betas {
                for p in 2..=p_max.unwrap_or(100) {
                    rows.push(match corollary3_sum(&xi, &delta, beta, p) {
                        Ok(r) => LemmaRow {
                            lemma: "cor3",
                            param: beta.clone(),
                            p,
                            x: Some(r.q),
                            lhs: format_rational(&r.sum.hi),
                            rhs_lo: format_rational(&r.bound.lo),
                            rhs_hi: format_rational(&r.bound.hi),
                            ok: r.ok,
                            note: format!("members={} conservative={}", r.members, r.conservative_count),
                        },
                        Err(e) => LemmaRow::failed("cor3", beta, p, e),
                    });
                }
            }
        }
        LemmaKind::Lemma4 => {
            let params = ctx.params()?;
            let schedule = ctx.config.schedule(&params.delta)?;
            let trace = run_trace(&params, &schedule, ctx.config.nu_max)?;
            for r in lemma4_sweep(&trace.stages, &params, samples)? {
                rows.push(LemmaRow {
                    lemma: "lemma4",
                    param: r.alpha.clone(),
                    p: r.q as u64,
                    x: Some(r.x),
                    lhs: format_rational(&r.lhs),
                    rhs_lo: format_rational(&r.rhs.lo),
                    rhs_hi: format_rational(&r.rhs.hi),
                    ok: r.ok,
                    note: format!("nu={}", r.nu),
                });
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lemma", "param", "p", "x", "lhs", "rhs_lo", "rhs_hi", "ok", "note"])
        .map_err(csv_err)?;
    for r in &rows {
        w.write_record([
            r.lemma.to_string(),
            format_rational(&r.param),
            r.p.to_string(),
            r.x.map(|x| x.to_string()).unwrap_or_default(),
            r.lhs.clone(),
            r.rhs_lo.clone(),
            r.rhs_hi.clone(),
            r.ok.to_string(),
            r.note.clone(),
        ])
        .map_err(csv_err)?;
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?).expect("utf8 csv");
    print!("{text}");
    ctx.write("lemma.csv", &text)?;
    let failed = rows.iter().filter(|r| !r.ok).count();
    if failed > 0 {
        eprintln!("{failed} of {} rows failed", rows.len());
        return Ok(EXIT_PROPERTY);
    }
    Ok(EXIT_OK)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Trace rows with the exact measure split into numerator and denominator.
pub fn trace_csv(trace: &Trace) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["nu", "q", "measure_num", "measure_den", "k1_count", "k2_count", "conservative_count"])
        .map_err(csv_err)?;
    for s in &trace.stages {
        w.write_record([
            s.nu.to_string(),
            s.q.to_string(),
            s.measure.numer().to_string(),
            s.measure.denom().to_string(),
            s.dangerous_counts[0].to_string(),
            s.dangerous_counts[1].to_string(),
            s.conservative_count.to_string(),
        ])
        .map_err(csv_err)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?).expect("utf8 csv"))
}

fn cmd_construct(mut ctx: Ctx, nu_max: Option<usize>) -> Result<i32> {
    if let Some(n) = nu_max {
        ctx.config.nu_max = n;
    }
    if ctx.out.is_none() {
        ctx.out = Some(PathBuf::from("."));
    }
    let params = ctx.params()?;
    if params.relaxed_delta() {
        eprintln!("warning: delta = {} > 2^-20; the halving lemma is not guaranteed", params.delta);
    }
    let schedule = ctx.config.schedule(&params.delta)?;
    let trace = run_trace(&params, &schedule, ctx.config.nu_max)?;
    ctx.write(&ctx.config.trace_csv, &trace_csv(&trace)?)?;
    for (nu, ok) in trace.measure_checks() {
        if !ok {
            eprintln!("note: stage {nu} has measure below 2^-{nu}");
        }
    }
    for s in trace.steps.iter().filter(|s| s.hypothesis && !s.conclusion) {
        eprintln!("note: step to stage {} violates the halving conclusion", s.nu);
    }
    let last = trace.last();
    if last.survivor.is_empty() {
        return Err(Error::EmptySurvivor { q: last.q });
    }
    let p_max = ctx.config.verified_up_to;
    let depth = ctx.config.witness_depth.unwrap_or(p_max as u128);
    let witness = if depth > last.q {
        let d = deepen(last, depth, &params)?;
        eprintln!(
            "windowed refinement to q = {} from {} inside {} kept {} segment(s)",
            d.q_to,
            d.start,
            d.window,
            d.survivor.len()
        );
        d.witness
    } else {
        extract_witness(&trace.stages)?
    };
    let cert = certify_pair(&witness, &params, p_max)?;
    let file = WitnessFile::new(&witness, p_max);
    ctx.write(&ctx.config.witness_json, &serde_json::to_string_pretty(&file)?)?;
    println!("{}", trace_csv(&trace)?.trim_end());
    println!("witness {witness} = [{}, {}]", file.lo, file.hi);
    if !cert.is_valid() {
        eprintln!("witness fails at p = {:?}", cert.failures);
        return Ok(EXIT_PROPERTY);
    }
    Ok(EXIT_OK)
}

fn cmd_certify(ctx: &Ctx, witness: &Path, up_to: Option<u64>) -> Result<i32> {
    let text = std::fs::read_to_string(witness)?;
    let file: WitnessFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", witness.display())))?;
    let seg = file.interval()?;
    let p_max = up_to.unwrap_or(file.verified_up_to);
    if p_max == 0 {
        return Err(Error::Precondition("verification bound must be >= 1".into()));
    }
    let cert = certify_pair(&seg, &ctx.params()?, p_max)?;
    let text = serde_json::to_string_pretty(&cert)?;
    println!("{text}");
    ctx.write(&ctx.config.certificate_json, &text)?;
    Ok(if cert.is_valid() { EXIT_OK } else { EXIT_PROPERTY })
}

fn cmd_schedule(mut ctx: Ctx, nu_max: Option<usize>) -> Result<i32> {
    if let Some(n) = nu_max {
        ctx.config.nu_max = n;
    }
    let params = ctx.params()?;
    let schedule = ctx.config.schedule(&params.delta)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "nu,q,estimated_segments")?;
    for (nu, q) in schedule.q_values.iter().enumerate() {
        let est = if nu == 0 { 0.0 } else { estimate_work(&params, schedule.q_values[nu - 1], *q) };
        writeln!(out, "{nu},{q},{est:.3e}")?;
    }
    Ok(EXIT_OK)
}
