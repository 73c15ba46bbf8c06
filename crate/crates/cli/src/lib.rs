//! Command-line front end: parses one request, runs it, renders a table.
//!
//! [`run`] never touches the process streams, so the whole surface can be
//! tested in-process.

use std::ffi::OsString;
use std::str::FromStr;

use clap::{ColorChoice, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use padic_harmonic::balls::{self, Ball};
use padic_harmonic::harmonic::{self, check_exact_cap, CoefficientMap, LevelFunction};
use padic_harmonic::padic::{Norm, PadicInt, Valuation};
use padic_harmonic::report::{float, Table};
use padic_harmonic::spectral::{self, DiracOperator};
use padic_harmonic::{arith, dual, CharIndex, Cyclotomic, Scalar};

/// Largest dense array (`p^L` samples or basis vectors) a command builds.
const MAX_DENSE: u64 = 1 << 22;
const MAX_TRACE_LEVELS: u32 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Parser)]
#[command(name = "padic-harmonic", version, color = ColorChoice::Never)]
#[command(about = "Harmonic analysis on the p-adic integers")]
pub struct Cli {
    /// Prime p.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Number of p-adic digits carried.
    #[arg(long, global = true, default_value_t = 8)]
    precision: usize,
    /// Truncation level L (functions on Z/p^L).
    #[arg(long, global = true)]
    level: Option<u32>,
    /// Summability parameter of the Dirac operator.
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    s: f64,
    /// Trace exponent; defaults to s.
    #[arg(long, global = true, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Use exact cyclotomic arithmetic.
    #[arg(long, global = true)]
    exact: bool,
    /// Largest p^L allowed in exact mode.
    #[arg(long = "exact-cap", global = true, default_value_t = harmonic::DEFAULT_EXACT_CAP)]
    exact_cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fixed-precision p-adic arithmetic.
    Padic {
        #[command(subcommand)]
        op: PadicOp,
    },
    /// Characters of Z_p.
    Chars {
        #[command(subcommand)]
        op: CharsOp,
    },
    /// Transforms between samples and character coefficients.
    Fourier {
        #[command(subcommand)]
        op: FourierOp,
    },
    /// Ball indicators and partitions.
    Ball {
        #[command(subcommand)]
        op: BallOp,
    },
    /// Partial sums of Tr |D|^{-t}.
    Zeta {
        /// Highest level summed; defaults to --level, then 20.
        #[arg(long)]
        levels: Option<u32>,
    },
    /// The commutator of D with multiplication by chi(m,n).
    Commutator {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u32,
    },
    /// Checks that D commutes with translation by y.
    Equivariance {
        #[arg(long, allow_hyphen_values = true)]
        y: i128,
    },
    /// Counts eigenvalues of D below a bound.
    Resolvent {
        #[arg(long, allow_negative_numbers = true)]
        bound: f64,
    },
}

#[derive(Debug, Subcommand)]
enum PadicOp {
    /// Digits, valuation, norm and Monna image of x.
    Show(Unary),
    Neg(Unary),
    Invert(Unary),
    Add(Binary),
    Sub(Binary),
    Mul(Binary),
    Valuation(Unary),
    Abs(Unary),
    /// x mod p^n.
    Project {
        #[command(flatten)]
        x: Unary,
        #[arg(long)]
        n: usize,
    },
    Monna(Unary),
}

/// Operands are integers, `int:<k>`, `rat:<a>/<b>`, or `p=.. N=.. digits=..`.
#[derive(Debug, clap::Args)]
struct Unary {
    #[arg(long, allow_hyphen_values = true)]
    x: String,
}

#[derive(Debug, clap::Args)]
struct Binary {
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    y: String,
}

#[derive(Debug, Subcommand)]
enum CharsOp {
    /// Every character of level at most --max-level (default --level).
    Enumerate {
        #[arg(long)]
        max_level: Option<u32>,
    },
    /// chi(m,n)(x) as an exact phase.
    Eval {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// The reduced index of the character a/p^n.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        a: i128,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Debug, clap::Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Comma-separated samples f(0), ..., f(p^L - 1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<String>>,
    /// Indicator of the single residue a.
    #[arg(long)]
    point: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum FourierOp {
    /// Direct summation.
    Dft(Input),
    /// Radix-p transform.
    Fft(Input),
    /// Transform and synthesize back.
    Roundtrip(Input),
}

#[derive(Debug, Subcommand)]
enum BallOp {
    /// Samples of the indicator of x + p^r Z_p at --level (default r).
    Indicator {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        r: u32,
    },
    /// Closed-form character coefficients of the indicator.
    Coefficients {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        r: u32,
    },
    /// Checks that the balls of radius r partition Z_p and [0, 1].
    Partition {
        #[arg(long)]
        r: u32,
    },
    /// The radius-r balls with their Monna intervals.
    Generators {
        #[arg(long)]
        r: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

type Run<T> = std::result::Result<T, Failure>;

fn usage(flag: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {e}"))
}

trait Flag<T> {
    fn flag(self, name: &str) -> Run<T>;
}

impl<T> Flag<T> for padic_harmonic::Result<T> {
    fn flag(self, name: &str) -> Run<T> {
        self.map_err(|e| usage(name, e))
    }
}

/// Runs one command. `args` excludes the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("padic-harmonic")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("error: invalid arguments");
            return Outcome { code: 2, stdout: String::new(), stderr: format!("{line}\n") };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Internal(msg)) => {
            Outcome { code: 1, stdout: String::new(), stderr: format!("internal error: {msg}\n") }
        }
    }
}

struct Config {
    p: u32,
    precision: usize,
    level: Option<u32>,
    s: f64,
    t: f64,
    format: Format,
    exact: bool,
    exact_cap: u64,
}

impl Config {
    fn from_cli(cli: &Cli) -> Run<Self> {
        let p = arith::check_prime(cli.p).flag("--p")?;
        if cli.precision == 0 {
            return Err(usage("--precision", "must be at least 1"));
        }
        if !(cli.s.is_finite() && cli.s > 0.0) {
            return Err(usage("--s", format!("must be positive and finite, got {}", cli.s)));
        }
        let t = cli.t.unwrap_or(cli.s);
        if !(t.is_finite() && t > 0.0) {
            return Err(usage("--t", format!("must be positive and finite, got {t}")));
        }
        if cli.exact_cap == 0 {
            return Err(usage("--exact-cap", "must be positive"));
        }
        Ok(Self {
            p,
            precision: cli.precision,
            level: cli.level,
            s: cli.s,
            t,
            format: cli.format,
            exact: cli.exact,
            exact_cap: cli.exact_cap,
        })
    }

    fn level_or(&self, default: u32) -> u32 {
        self.level.unwrap_or(default)
    }

    /// Rejects levels whose dense arrays would not fit.
    fn dense(&self, flag: &str, level: u32) -> Run<()> {
        match arith::pow(self.p, level) {
            Ok(q) if q <= MAX_DENSE => {}
            _ => return Err(usage(flag, format!("p^{level} exceeds the dense size limit {MAX_DENSE}"))),
        }
        if self.exact {
            check_exact_cap(self.p, level, self.exact_cap).flag("--exact")?;
        }
        Ok(())
    }

    fn dirac(&self) -> Run<DiracOperator> {
        DiracOperator::new(self.p, self.s).flag("--s")
    }

    fn render(&self, table: Table) -> Run<String> {
        Ok(match self.format {
            Format::Json => table.to_json(),
            Format::Csv => table.to_csv().map_err(|e| Failure::Internal(e.to_string()))?,
            Format::Plain => table.to_plain(),
        })
    }
}

fn execute(cli: &Cli) -> Run<String> {
    let cfg = Config::from_cli(cli)?;
    let table = match &cli.command {
        Command::Padic { op } => padic(&cfg, op)?,
        Command::Chars { op } => chars(&cfg, op)?,
        Command::Fourier { op } => fourier(&cfg, op)?,
        Command::Ball { op } => ball(&cfg, op)?,
        Command::Zeta { levels } => zeta(&cfg, *levels)?,
        Command::Commutator { m, n } => {
            let c = CharIndex::new(cfg.p, *m, *n).flag("--m")?;
            let level = cfg.level_or(*n);
            if level < *n {
                return Err(usage("--level", format!("must be at least the character level {n}")));
            }
            cfg.dense("--level", level)?;
            spectral::commutator_matrix(&c, &cfg.dirac()?, level).flag("--level")?.0.to_table()
        }
        Command::Equivariance { y } => {
            let level = cfg.level_or(4);
            cfg.dense("--level", level)?;
            let deviation = spectral::check_equivariance(*y, &cfg.dirac()?, level).flag("--y")?;
            let mut t = Table::new(["y", "L", "s", "deviation"]);
            t.push(vec![json!(y.to_string()), json!(level), float(cfg.s), float(deviation)]);
            t
        }
        Command::Resolvent { bound } => {
            let report = spectral::resolvent_compactness_check(&cfg.dirac()?, *bound).flag("--bound")?;
            let mut t = Table::new(["bound", "count", "first_level"]);
            t.push(vec![float(*bound), json!(report.count.to_string()), json!(report.first_level)]);
            t
        }
    };
    cfg.render(table)
}

fn parse_padic(cfg: &Config, flag: &str, s: &str) -> Run<PadicInt> {
    let parsed = match s.trim().parse::<i128>() {
        Ok(k) => PadicInt::from_integer(k, cfg.p as u64, cfg.precision),
        Err(_) => PadicInt::parse(s, cfg.p as u64, cfg.precision),
    };
    let x = parsed.flag(flag)?;
    if x.prime() != cfg.p {
        return Err(usage(flag, format!("operand has p={}, expected {}", x.prime(), cfg.p)));
    }
    Ok(x)
}

fn valuation_text(v: Valuation) -> String {
    match v {
        Valuation::Known(v) => v.to_string(),
        Valuation::AtLeast(v) => format!(">={v}"),
    }
}

fn norm_text(n: &Norm) -> String {
    match n {
        Norm::Exact(v) => v.to_string(),
        Norm::AtMost(v) => format!("<={v}"),
    }
}

fn padic(cfg: &Config, op: &PadicOp) -> Run<Table> {
    let mut rows: Vec<(&str, String)> = Vec::new();
    match op {
        PadicOp::Show(u) => {
            let x = parse_padic(cfg, "--x", &u.x)?;
            let residue = x.project(x.precision()).flag("--precision")?;
            rows.push(("x", x.to_string()));
            rows.push(("residue", residue.to_string()));
            rows.push(("valuation", valuation_text(x.valuation())));
            rows.push(("abs", norm_text(&x.abs_p())));
            rows.push(("monna", x.monna().to_string()));
        }
        PadicOp::Neg(u) | PadicOp::Invert(u) => {
            let x = parse_padic(cfg, "--x", &u.x)?;
            let result = match op {
                PadicOp::Neg(_) => x.neg(),
                _ => x.invert().flag("--x")?,
            };
            rows.push(("x", x.to_string()));
            rows.push(("result", result.to_string()));
        }
        PadicOp::Add(b) | PadicOp::Sub(b) | PadicOp::Mul(b) => {
            let x = parse_padic(cfg, "--x", &b.x)?;
            let y = parse_padic(cfg, "--y", &b.y)?;
            let result = match op {
                PadicOp::Add(_) => x.add(&y),
                PadicOp::Sub(_) => x.sub(&y),
                _ => x.mul(&y),
            }
            .flag("--y")?;
            rows.push(("x", x.to_string()));
            rows.push(("y", y.to_string()));
            rows.push(("result", result.to_string()));
        }
        PadicOp::Valuation(u) => {
            let x = parse_padic(cfg, "--x", &u.x)?;
            rows.push(("x", x.to_string()));
            rows.push(("valuation", valuation_text(x.valuation())));
        }
        PadicOp::Abs(u) => {
            let x = parse_padic(cfg, "--x", &u.x)?;
            rows.push(("x", x.to_string()));
            rows.push(("abs", norm_text(&x.abs_p())));
        }
        PadicOp::Project { x, n } => {
            let x = parse_padic(cfg, "--x", &x.x)?;
            let residue = x.project(*n).flag("--n")?;
            rows.push(("x", x.to_string()));
            rows.push(("residue", residue.to_string()));
        }
        PadicOp::Monna(u) => {
            let x = parse_padic(cfg, "--x", &u.x)?;
            rows.push(("x", x.to_string()));
            rows.push(("monna", x.monna().to_string()));
        }
    }
    let mut t = Table::new(["field", "value"]);
    for (k, v) in rows {
        t.push(vec![json!(k), json!(v)]);
    }
    Ok(t)
}

fn chars(cfg: &Config, op: &CharsOp) -> Run<Table> {
    match op {
        CharsOp::Enumerate { max_level } => {
            let level = max_level.unwrap_or(cfg.level_or(2));
            let flag = if max_level.is_some() { "--max-level" } else { "--level" };
            cfg.dense(flag, level)?;
            let mut t = Table::new(["m", "n", "position"]);
            for c in dual::enumerate(cfg.p, level).flag(flag)? {
                t.push(vec![json!(c.m()), json!(c.level()), json!(c.position())]);
            }
            Ok(t)
        }
        CharsOp::Eval { m, n, x } => {
            let c = CharIndex::new(cfg.p, *m, *n).flag("--m")?;
            let phase = match x.trim().parse::<i128>() {
                Ok(k) => c.eval(&k),
                Err(_) => c.eval(&parse_padic(cfg, "--x", x)?),
            }
            .flag("--x")?;
            let z = phase.to_complex();
            let mut t = Table::new(["m", "n", "phase", "re", "im"]);
            t.push(vec![json!(c.m()), json!(c.level()), json!(phase.to_string()), float(z.re), float(z.im)]);
            Ok(t)
        }
        CharsOp::Reduce { a, n } => {
            let c = CharIndex::reduce(cfg.p, *a, *n).flag("--n")?;
            let mut t = Table::new(["m", "n", "position"]);
            t.push(vec![json!(c.m()), json!(c.level()), json!(c.position())]);
            Ok(t)
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (BigInt::from_str(a.trim()).ok()?, BigInt::from_str(b.trim()).ok()?);
        return (b != BigInt::from(0)).then(|| BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = BigInt::from_str(&format!("{int}{frac}")).ok()?;
    Some(BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len())))
}

/// Samples as a float function; also reports the level they imply.
fn float_input(cfg: &Config, input: &Input) -> Run<LevelFunction<Complex64>> {
    match (&input.values, input.point) {
        (Some(values), _) => {
            let samples = values
                .iter()
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .ok()
                        .or_else(|| parse_rational(v).map(|r| ratio_f64(&r)))
                        .filter(|x| x.is_finite())
                        .map(|x| Complex64::new(x, 0.0))
                        .ok_or_else(|| usage("--values", format!("not a real number: {v:?}")))
                })
                .collect::<Run<Vec<_>>>()?;
            let level = input_level(cfg, samples.len())?;
            LevelFunction::new(cfg.p, level, samples).flag("--values")
        }
        (None, Some(a)) => {
            let level = cfg.level_or(2);
            cfg.dense("--level", level)?;
            point_mass(cfg, a, level)
        }
        (None, None) => Err(usage("--values", "an input function is required")),
    }
}

fn exact_input(cfg: &Config, input: &Input) -> Run<LevelFunction<Cyclotomic>> {
    match (&input.values, input.point) {
        (Some(values), _) => {
            let samples = values
                .iter()
                .map(|v| {
                    parse_rational(v)
                        .map(Cyclotomic::rational)
                        .ok_or_else(|| usage("--values", format!("not an exact rational: {v:?}")))
                })
                .collect::<Run<Vec<_>>>()?;
            let level = input_level(cfg, samples.len())?;
            LevelFunction::new(cfg.p, level, samples).flag("--values")
        }
        (None, Some(a)) => {
            let level = cfg.level_or(2);
            cfg.dense("--level", level)?;
            point_mass(cfg, a, level)
        }
        (None, None) => Err(usage("--values", "an input function is required")),
    }
}

fn point_mass<T: Scalar>(cfg: &Config, a: u64, level: u32) -> Run<LevelFunction<T>> {
    let q = arith::pow(cfg.p, level).flag("--level")?;
    if a >= q {
        return Err(usage("--point", format!("must be below p^L = {q}")));
    }
    LevelFunction::from_fn(cfg.p, level, |x| T::from_ratio((x == a) as i64, 1)).flag("--level")
}

fn ratio_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// The level implied by a sample count, checked against --level if given.
fn input_level(cfg: &Config, len: usize) -> Run<u32> {
    let mut level = 0u32;
    let mut q = 1usize;
    while q < len {
        q = q.saturating_mul(cfg.p as usize);
        level += 1;
    }
    if q != len {
        return Err(usage("--values", format!("expected p^L samples, got {len}")));
    }
    if let Some(l) = cfg.level {
        if l != level {
            return Err(usage("--level", format!("{len} samples are level {level}, not {l}")));
        }
    }
    cfg.dense("--values", level)?;
    Ok(level)
}

fn coefficient_table<T: Scalar + std::fmt::Display>(coeffs: &CoefficientMap<T>, exact: bool) -> Table {
    if !exact {
        return coeffs.to_table();
    }
    let mut t = Table::new(["m", "n", "re", "im", "exact"]);
    for (c, v) in coeffs.iter() {
        let z = v.to_complex();
        t.push(vec![json!(c.m()), json!(c.level()), float(z.re), float(z.im), json!(v.to_string())]);
    }
    t
}

fn sample_table<T: Scalar + std::fmt::Display>(f: &LevelFunction<T>, exact: bool) -> Table {
    let mut columns = vec!["x", "re", "im"];
    if exact {
        columns.push("exact");
    }
    let mut t = Table::new(columns);
    for (x, v) in f.values().iter().enumerate() {
        let z = v.to_complex();
        let mut row: Vec<Value> = vec![json!(x), float(z.re), float(z.im)];
        if exact {
            row.push(json!(v.to_string()));
        }
        t.push(row);
    }
    t
}

fn fourier(cfg: &Config, op: &FourierOp) -> Run<Table> {
    if cfg.exact {
        let input = match op {
            FourierOp::Dft(i) | FourierOp::Fft(i) | FourierOp::Roundtrip(i) => exact_input(cfg, i)?,
        };
        transform(op, &input, true)
    } else {
        let input = match op {
            FourierOp::Dft(i) | FourierOp::Fft(i) | FourierOp::Roundtrip(i) => float_input(cfg, i)?,
        };
        transform(op, &input, false)
    }
}

fn transform<T: Scalar + std::fmt::Display>(op: &FourierOp, f: &LevelFunction<T>, exact: bool) -> Run<Table> {
    let internal = |e: padic_harmonic::Error| Failure::Internal(e.to_string());
    match op {
        FourierOp::Dft(_) => Ok(coefficient_table(&harmonic::dft(f).map_err(internal)?, exact)),
        FourierOp::Fft(_) => Ok(coefficient_table(&harmonic::fft(f).map_err(internal)?, exact)),
        FourierOp::Roundtrip(_) => {
            let coeffs = harmonic::fft(f).map_err(internal)?;
            let back = harmonic::synthesize(&coeffs, f.level()).map_err(internal)?;
            let deviation = back.max_abs_diff(f).map_err(internal)?;
            Ok(sample_table(&back, exact)
                .meta("max_abs_diff", float(deviation))
                .meta("identical", json!(&back == f)))
        }
    }
}

fn ball(cfg: &Config, op: &BallOp) -> Run<Table> {
    match op {
        BallOp::Indicator { x, r } => {
            let b = Ball::new(cfg.p, *x, *r).flag("--x")?;
            let level = cfg.level_or(*r);
            if level < *r {
                return Err(usage("--level", format!("must be at least the radius {r}")));
            }
            cfg.dense("--level", level)?;
            let f = balls::ball_indicator::<Complex64>(&b, level).flag("--level")?;
            let mut t = Table::new(["x", "value"]).meta("ball", json!(b.to_string()));
            for (k, v) in f.values().iter().enumerate() {
                t.push(vec![json!(k), float(v.re)]);
            }
            Ok(t)
        }
        BallOp::Coefficients { x, r } => {
            let b = Ball::new(cfg.p, *x, *r).flag("--x")?;
            cfg.dense("--r", *r)?;
            let table = if cfg.exact {
                coefficient_table(&balls::ball_coefficients::<Cyclotomic>(&b).flag("--r")?, true)
            } else {
                coefficient_table(&balls::ball_coefficients::<Complex64>(&b).flag("--r")?, false)
            };
            Ok(table.meta("ball", json!(b.to_string())))
        }
        BallOp::Partition { r } => {
            let level = cfg.level_or(*r);
            if level < *r {
                return Err(usage("--level", format!("must be at least the radius {r}")));
            }
            cfg.dense("--level", level)?;
            Ok(balls::verify_partition(cfg.p, *r, level).flag("--r")?.to_table())
        }
        BallOp::Generators { r } => {
            if *r == 0 {
                return Err(usage("--r", "must be at least 1"));
            }
            cfg.dense("--r", *r)?;
            let q = arith::pow(cfg.p, *r).flag("--r")?;
            let mut t = Table::new(["ball", "lo", "hi"]).meta("p", json!(cfg.p)).meta("r", json!(r));
            for x in 0..q {
                let b = Ball::new(cfg.p, x, *r).flag("--r")?;
                let (lo, hi) = balls::monna_interval(&b);
                t.push(vec![json!(b.to_string()), json!(lo.to_string()), json!(hi.to_string())]);
            }
            Ok(t)
        }
    }
}

fn zeta(cfg: &Config, levels: Option<u32>) -> Run<Table> {
    let (flag, max_level) = match (levels, cfg.level) {
        (Some(l), _) => ("--levels", l),
        (None, Some(l)) => ("--level", l),
        (None, None) => ("--levels", 20),
    };
    if max_level > MAX_TRACE_LEVELS {
        return Err(usage(flag, format!("at most {MAX_TRACE_LEVELS}")));
    }
    let d = cfg.dirac()?;
    let report = spectral::trace_power(&d, cfg.t, max_level).flag("--t")?;
    let mut table = report.to_table().meta("p", json!(cfg.p)).meta("s", float(cfg.s)).meta("t", float(cfg.t));
    if cfg.t == cfg.s {
        table = table.meta("limit", float(d.trace_limit()));
    }
    Ok(table)
}
