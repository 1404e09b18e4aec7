//! Command surface: `lift`, `verify`, `reduce`, `whittaker`.
//!
//! Exit codes are 0 on success, 1 when a verification fails and 2 on any
//! usage or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::{json, Value};

use crate::classify::Verdict;
use crate::jacobi::JacobiRing;
use crate::orbits::{rank_int, reduce_pair_rank3};
use crate::pairspace::{q_of_b, t_triple, PairB};
use crate::quaternionic::{cuspidality_classifier, maass_relation_check, spezialschar_test, theta_lift, Family, QuatCoeffTable};
use crate::siegel::maass_lift;
use crate::whittaker::linalg::ident8;
use crate::whittaker::{bessel_line_fit, fj_arch_integral, whittaker_eval, ArchParams, KNorm};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const OUT_DIR_ENV: &str = "QSK_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "qsk", version, about = "Quaternionic Saito-Kurokawa coefficient toolkit")]
pub struct Cli {
    /// key=value file; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maass lift of a Jacobi cusp form followed by the theta lift
    Lift(LiftArgs),
    /// Run verification suites on a stored quaternionic table
    Verify(VerifyArgs),
    /// Rank and canonical form of an integral pair
    Reduce(ReduceArgs),
    /// Whittaker point values and integral sweeps
    Whittaker(WhittakerArgs),
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    #[arg(long)]
    pub weight: i64,
    #[arg(long)]
    pub qmax: i64,
    /// index into the Jacobi cusp basis
    #[arg(long, default_value_t = 0)]
    pub basis: usize,
    #[arg(long, value_enum, default_value_t = FamilyArg::Full)]
    pub family: FamilyArg,
    /// quaternionic table path; the Siegel table goes next to it
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    Full,
    Primitive,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckArg {
    Maass,
    Spezialschar,
    Cuspidal,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long = "check", value_enum, value_delimiter = ',', required = true)]
    pub checks: Vec<CheckArg>,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// weight used by the cuspidality classifier (defaults to the table's)
    #[arg(long)]
    pub weight: Option<i64>,
    /// Q bound for the checks (defaults to the table's)
    #[arg(long)]
    pub bound: Option<i64>,
    /// report path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// `{"t1":[[a,b],[c,d]],"t2":[[e,f],[g,h]]}` or `[[[a,b],[c,d]],[[e,f],[g,h]]]`
    #[arg(long)]
    pub pair: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormArg {
    Scaled,
    Standard,
}

impl From<NormArg> for KNorm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Scaled => KNorm::Scaled,
            NormArg::Standard => KNorm::Standard,
        }
    }
}

#[derive(Args, Debug)]
pub struct WhittakerArgs {
    /// CSV sweep of the Bessel line integral over `--v` and `--c`
    #[arg(long)]
    pub bessel_sweep: bool,
    /// CSV sweep of the archimedean Fourier-Jacobi integral over `--t`
    #[arg(long)]
    pub arch_sweep: bool,
    /// inclusive range `a..b` or a comma list
    #[arg(long, default_value = "0..3")]
    pub v: String,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4")]
    pub c: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub alpha: i64,
    #[arg(long, default_value_t = 1)]
    pub n: i64,
    /// `n',m',r'`
    #[arg(long, value_delimiter = ',', default_value = "1,1,0")]
    pub s: Vec<i64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    pub t: Vec<f64>,
    /// integral pair for a point evaluation at the identity
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    #[arg(long, value_enum, default_value_t = NormArg::Scaled)]
    pub norm: NormArg,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// output path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Outcome of a command: exit code plus the text for stdout.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Parse a key=value file. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::Parse(format!("config line {}: empty key", i + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Splice config entries into the argument list as flags not already given.
pub fn merge_config(mut args: Vec<String>, cfg: &BTreeMap<String, String>) -> Vec<String> {
    const COMMANDS: [&str; 4] = ["lift", "verify", "reduce", "whittaker"];
    let has_cmd = args.iter().skip(1).any(|a| COMMANDS.contains(&a.as_str()));
    if !has_cmd {
        if let Some(c) = cfg.get("command") {
            args.insert(1.min(args.len()), c.clone());
        }
    }
    let given = |args: &[String], k: &str| {
        let flag = format!("--{k}");
        let eq = format!("--{k}=");
        args.iter().any(|a| *a == flag || a.starts_with(&eq))
    };
    for (k, v) in cfg {
        if k == "command" || given(&args, k) {
            continue;
        }
        match v.as_str() {
            "true" => args.push(format!("--{k}")),
            "false" => {}
            _ => args.push(format!("--{k}={v}")),
        }
    }
    args
}

/// Default output directory: `$QSK_OUT_DIR` or the working directory.
pub fn out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn usage(e: Error) -> Outcome {
    eprintln!("error: {e}");
    Outcome { code: EXIT_USAGE, stdout: String::new() }
}

/// Entry point used by the binary. Returns the process exit code.
pub fn run<I: IntoIterator<Item = OsString>>(argv: I) -> i32 {
    let out = run_captured(argv);
    if !out.stdout.is_empty() {
        let mut so = std::io::stdout().lock();
        let _ = so.write_all(out.stdout.as_bytes());
    }
    out.code
}

/// As [`run`] but returns stdout instead of printing it.
pub fn run_captured<I: IntoIterator<Item = OsString>>(argv: I) -> Outcome {
    let mut args: Vec<String> = argv.into_iter().map(|a| a.to_string_lossy().into_owned()).collect();
    if args.is_empty() {
        args.push("qsk".into());
    }
    if let Some(p) = config_path(&args) {
        let cfg = match fs::read_to_string(&p).map_err(|e| Error::Parse(format!("{p}: {e}"))).and_then(|t| parse_config(&t)) {
            Ok(c) => c,
            Err(e) => return usage(e),
        };
        args = merge_config(args, &cfg);
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return Outcome { code, stdout: String::new() };
        }
    };
    let res = match cli.command {
        Command::Lift(a) => cmd_lift(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Reduce(a) => cmd_reduce(&a),
        Command::Whittaker(a) => cmd_whittaker(&a),
    };
    res.unwrap_or_else(usage)
}

fn write_or_stdout(path: Option<&Path>, text: String) -> Result<String> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn cmd_lift(a: &LiftArgs) -> Result<Outcome> {
    if a.weight % 2 != 0 || a.weight < 16 {
        return Err(Error::Domain(format!("weight must be even and >= 16, got {}", a.weight)));
    }
    if a.qmax <= 0 {
        return Err(Error::Domain(format!("qmax must be positive, got {}", a.qmax)));
    }
    let ring = JacobiRing::new((a.qmax as usize).div_ceil(4) + 1)?;
    let basis = ring.cusp_basis(a.weight)?;
    let phi = basis.get(a.basis).ok_or_else(|| Error::Domain(format!("basis index {} out of range (dimension {})", a.basis, basis.len())))?;
    let siegel = maass_lift(phi, a.qmax)?;
    let family = match a.family {
        FamilyArg::Full => Family::Full,
        FamilyArg::Primitive => Family::Primitive,
    };
    let quat = theta_lift(&siegel, a.qmax, family)?;
    let out = a.out.clone().unwrap_or_else(|| out_dir().join(format!("lift_w{}_q{}.json", a.weight, a.qmax)));
    let siegel_path = out.with_extension("siegel.json");
    fs::write(&out, to_pretty(&quat.to_json())).map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?;
    fs::write(&siegel_path, to_pretty(&siegel.to_json())).map_err(|e| Error::Parse(format!("{}: {e}", siegel_path.display())))?;
    eprintln!("lift: {} ({} coefficients), {}", out.display(), quat.len(), siegel_path.display());
    Ok(Outcome { code: EXIT_OK, stdout: String::new() })
}

pub fn load_table(p: &Path) -> Result<QuatCoeffTable> {
    let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    QuatCoeffTable::from_json(&v)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let table = load_table(&a.input)?;
    let bound = a.bound.unwrap_or(table.bound);
    let ell = a.weight.unwrap_or(table.weight);
    let mut report = serde_json::Map::new();
    let mut pass = true;
    for check in &a.checks {
        let (name, ok, body) = match check {
            CheckArg::Maass => match maass_relation_check(&table, bound) {
                Ok(r) => ("maass", r.pass, serde_json::to_value(&r).expect("serializable")),
                Err(Error::MaassViolation(m)) => ("maass", false, json!({ "pass": false, "error": m })),
                Err(e) => return Err(e),
            },
            CheckArg::Spezialschar => {
                let r = spezialschar_test(&table, bound);
                ("spezialschar", r.pass, serde_json::to_value(&r).expect("serializable"))
            }
            CheckArg::Cuspidal => {
                let r = cuspidality_classifier(&table, ell)?;
                let ok = r.verdict == Verdict::ConsistentWithCusp;
                ("cuspidal", ok, serde_json::to_value(&r).expect("serializable"))
            }
        };
        eprintln!("{name}: {}", if ok { "PASS" } else { "FAIL" });
        pass &= ok;
        report.insert(name.into(), body);
    }
    report.insert("pass".into(), json!(pass));
    let text = to_pretty(&Value::Object(report));
    let stdout = write_or_stdout(a.out.as_deref(), text)?;
    Ok(Outcome { code: if pass { EXIT_OK } else { EXIT_FAIL }, stdout })
}

/// Accepts the object form `{"t1":..,"t2":..}` or a bare array of two matrices.
pub fn parse_pair(s: &str) -> Result<PairB> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("pair JSON: {e}")))?;
    let v = match v {
        Value::Array(ref xs) if xs.len() == 2 => json!({ "t1": xs[0], "t2": xs[1] }),
        other => other,
    };
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("pair JSON: {e}")))
}

pub fn cmd_reduce(a: &ReduceArgs) -> Result<Outcome> {
    let b = parse_pair(&a.pair)?;
    let rank = rank_int(&b)?;
    let mut out = json!({
        "pair": b,
        "rank": rank,
        "Q": q_of_b(&b),
        "T": t_triple(&b),
    });
    if rank >= 3 {
        let c = reduce_pair_rank3(&b)?;
        out["canonical"] = json!({ "alpha": c.alpha, "n": c.n, "m": c.m, "r": c.r, "pair": c.pair() });
        out["transform"] = serde_json::to_value(&c.transform).expect("serializable");
    }
    Ok(Outcome { code: EXIT_OK, stdout: to_pretty(&out) })
}

/// `a..b` (inclusive) or `x,y,z`.
pub fn parse_int_range(s: &str) -> Result<Vec<i32>> {
    let bad = || Error::Parse(format!("bad integer range {s:?}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn fmt_c(z: C64) -> String {
    format!("{:.12e},{:.12e}", z.re, z.im)
}

pub fn cmd_whittaker(a: &WhittakerArgs) -> Result<Outcome> {
    let norm: KNorm = a.norm.into();
    let modes = [a.bessel_sweep, a.arch_sweep, a.pair.is_some()].iter().filter(|x| **x).count();
    if modes != 1 {
        return Err(Error::Domain("choose exactly one of --bessel-sweep, --arch-sweep, --pair".into()));
    }
    let text = if a.bessel_sweep {
        let vs = parse_int_range(&a.v)?;
        let mut csv = String::from("v,c,re,im,abs,kappa,lambda,phase_re,phase_im\n");
        for v in vs {
            let fit = bessel_line_fit(v, &a.c, norm)?;
            for (c, val) in fit.cs.iter().zip(&fit.values) {
                let z = C64::new(val[0], val[1]);
                csv += &format!("{v},{c},{},{:.12e},{:.12e},{:.12e},{:.6},{:.6}\n", fmt_c(z), z.norm(), fit.kappa, fit.lambda, fit.phase[0] + 0.0, fit.phase[1] + 0.0);
            }
        }
        csv
    } else if a.arch_sweep {
        if a.s.len() != 3 {
            return Err(Error::Parse("--s needs three integers n',m',r'".into()));
        }
        let mut csv = String::from("t,c,sigma,support_ok,max_abs\n");
        for &t in &a.t {
            let p = ArchParams { alpha: a.alpha, n: a.n, s_data: (a.s[0], a.s[1], a.s[2]), t, boost: 0.0, ell: a.ell, norm, tol: a.tol };
            let r = fj_arch_integral(&p)?;
            csv += &format!("{t},{:.12e},{:.12e},{},{:.12e}\n", r.c, r.sigma, r.support_ok, r.value.max_abs());
        }
        csv
    } else {
        let b = parse_pair(a.pair.as_deref().unwrap_or_default())?;
        let w = whittaker_eval(&b.to_q(), &ident8(), a.ell, norm)?;
        let comps: Vec<Value> = (-(a.ell as i32)..=a.ell as i32).map(|v| { let z = w.get(v); json!({ "v": v, "re": z.re, "im": z.im }) }).collect();
        to_pretty(&json!({ "pair": b, "ell": a.ell, "vanishing": w.vanishing, "components": comps }))
    };
    let stdout = write_or_stdout(a.out.as_deref(), text)?;
    Ok(Outcome { code: EXIT_OK, stdout })
}
