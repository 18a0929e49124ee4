//! `hilb`: batch front end for the quantum cohomology library.

mod config;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;

use hilbq::exact::{parse_rational, QRat, Rational};
use hilbq::fock::FockVector;
use hilbq::invariants::{fixed_structure, gw_transform, multipoint, Insertion, QuantumRing, Strategy};
use hilbq::jack::{jack_basis, jack_vector};
use hilbq::operators::md_cached;
use hilbq::partitions::Partition;
use hilbq::qde::{formal_solution_at, monodromy_probe, singularities_at, Loop};
use hilbq::verify::{self, Suite};

use config::Config;

#[derive(Parser, Debug)]
#[command(name = "hilb", version, about = "Quantum cohomology of Hilbert schemes of points in the plane")]
struct Cli {
    /// key=value file with defaults; flags override it
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
struct Params {
    /// specialize t1 to a rational number
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<String>,
    /// specialize t2 to a rational number
    #[arg(long, allow_hyphen_values = true)]
    t2: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The matrix of quantum multiplication by the divisor
    Matrix {
        #[arg(long)]
        n: u32,
        /// only the classical part, at q = 0
        #[arg(long)]
        q0: bool,
        #[command(flatten)]
        params: Params,
    },
    /// Quantum product of two classes
    Product {
        #[arg(long)]
        n: u32,
        /// a partition like "[2,1]" or a Fock vector in JSON
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        params: Params,
    },
    /// Multipoint invariant as a q-series
    Invariant {
        #[arg(long)]
        n: u32,
        /// `;`-separated insertions: partitions, `D`, or `D^k`
        #[arg(long)]
        insertions: String,
        #[arg(long)]
        order: Option<usize>,
        /// contract 3-point data with the domain moduli frozen
        #[arg(long)]
        fixed_structure: bool,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
    },
    /// Transform of a fixed-structure invariant to a series in u
    Gw {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        insertions: String,
        #[arg(long)]
        u_order: Option<i64>,
    },
    /// Fixed-point classes
    Jack {
        #[arg(long, conflicts_with = "n")]
        lambda: Option<String>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Formal solution of the quantum differential equation at q = 0
    Qde {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        order: Option<usize>,
        /// verify the residual vanishes; exit 1 if not
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        params: Params,
    },
    /// Numerical monodromy around a loop
    Monodromy {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        params: Params,
        /// e.g. "center=-1,radius=0.25" or "center=0,radius=0.5,base=0,base_im=-1"
        #[arg(long = "loop", allow_hyphen_values = true)]
        lp: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Singular points of the quantum differential equation
    Singularities {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        params: Params,
    },
    /// Run a verification suite
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        max_n: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    First,
    Last,
}

/// Failures that map to the exit-code contract.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Verification(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Failure::Usage(msg.into()).into()
}

struct Ctx {
    format: Format,
    config: Config,
}

impl Ctx {
    fn order(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize> {
        match flag {
            Some(v) => Ok(v),
            None => self.config.get_parsed(key).map_err(|e| usage(e.to_string()))?.map_or(Ok(default), Ok),
        }
    }

    fn params(&self, p: &Params) -> Result<Option<(Rational, Rational)>> {
        let t1 = p.t1.clone().or_else(|| self.config.get("t1").map(str::to_string));
        let t2 = p.t2.clone().or_else(|| self.config.get("t2").map(str::to_string));
        match (t1, t2) {
            (None, None) => Ok(None),
            (Some(a), Some(b)) => Ok(Some((rational("--t1", &a)?, rational("--t2", &b)?))),
            _ => Err(usage("--t1 and --t2 must be given together")),
        }
    }

    fn emit(&self, json: Value, csv: impl FnOnce() -> String, text: impl FnOnce() -> String) {
        let out = match self.format {
            Format::Json => serde_json::to_string_pretty(&json).expect("serializable") + "\n",
            Format::Csv => csv(),
            Format::Text => text(),
        };
        // a closed pipe (e.g. `| head`) is not an error worth reporting
        let _ = std::io::stdout().lock().write_all(out.as_bytes());
    }
}

fn rational(flag: &str, s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| usage(format!("{flag}: `{s}` is not a rational number")))
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 || n > 12 {
        return Err(usage(format!("--n: expected 1..=12, got {n}")));
    }
    Ok(())
}

fn partition(flag: &str, s: &str) -> Result<Partition> {
    s.parse().map_err(|e| usage(format!("{flag}: {e}")))
}

fn class(flag: &str, n: u32, s: &str) -> Result<FockVector<QRat>> {
    let t = s.trim();
    let v = if t.starts_with('{') {
        let value: Value = serde_json::from_str(t).map_err(|e| usage(format!("{flag}: {e}")))?;
        FockVector::<QRat>::from_json(&value).map_err(|e| usage(format!("{flag}: {e}")))?
    } else {
        FockVector::basis(partition(flag, t)?)
    };
    if v.n() != n && !v.is_zero() {
        return Err(usage(format!("{flag}: class has energy {}, expected {n}", v.n())));
    }
    Ok(v)
}

fn insertions(n: u32, s: &str) -> Result<Vec<Insertion>> {
    s.split(';')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            if x == "D" {
                return Ok(Insertion::Power(1));
            }
            if x == "1" {
                return Ok(Insertion::Power(0));
            }
            if let Some(k) = x.strip_prefix("D^") {
                let k = k.parse().map_err(|_| usage(format!("--insertions: bad power `{x}`")))?;
                return Ok(Insertion::Power(k));
            }
            let p = partition("--insertions", x)?;
            if p.size() != n {
                return Err(usage(format!("--insertions: {p} is not a partition of {n}")));
            }
            Ok(Insertion::Basis(p))
        })
        .collect()
}

fn basis_insertions(n: u32, s: &str) -> Result<Vec<Partition>> {
    insertions(n, s)?
        .into_iter()
        .map(|i| match i {
            Insertion::Basis(p) => Ok(p),
            _ => Err(usage("--insertions: only partitions are allowed here")),
        })
        .collect()
}

fn series_csv(coeffs: &[String]) -> String {
    let mut out = String::from("power,coefficient\n");
    for (d, c) in coeffs.iter().enumerate() {
        out.push_str(&format!("{d},\"{c}\"\n"));
    }
    out
}

fn series_text(coeffs: &[String], var: &str) -> String {
    coeffs.iter().enumerate().map(|(d, c)| format!("{var}^{d}: {c}\n")).collect()
}

fn ring(n: u32, at: &Option<(Rational, Rational)>) -> Result<QuantumRing> {
    Ok(match at {
        Some((a, b)) => QuantumRing::specialized(n, a, b)?,
        None => QuantumRing::new(n)?,
    })
}

fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| usage(format!("--config: {e:#}")))?,
        None => Config::default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => match config.get("format") {
            None => Format::Json,
            Some(s) => Format::from_str(s, true).map_err(|_| usage(format!("config format: unknown `{s}`")))?,
        },
    };
    let ctx = Ctx { format, config };
    match cli.command {
        Command::Matrix { n, q0, params } => {
            check_n(n)?;
            let md = md_cached(n);
            let md = match ctx.params(&params)? {
                Some((a, b)) => md.specialize(&a, &b).ok_or_else(|| anyhow!("specialization makes M_D singular"))?,
                None => (*md).clone(),
            };
            if q0 {
                let m = md.at_q0();
                ctx.emit(m.to_json(), || m.to_csv(), || text_matrix(&m.to_json()));
            } else {
                ctx.emit(md.to_json(), || md.to_csv(), || text_matrix(&md.to_json()));
            }
        }
        Command::Product { n, a, b, params } => {
            check_n(n)?;
            let (a, b) = (class("--a", n, &a)?, class("--b", n, &b)?);
            let r = ring(n, &ctx.params(&params)?)?;
            let p = r.multiply(&a, &b)?;
            let csv = || {
                let mut out = String::from("partition,coefficient\n");
                for (mu, c) in p.iter() {
                    out.push_str(&format!("\"{mu}\",\"{c}\"\n"));
                }
                out
            };
            ctx.emit(p.to_json(), csv, || format!("{p}\n"));
        }
        Command::Invariant { n, insertions: ins, order, fixed_structure: fixed, strategy } => {
            check_n(n)?;
            let order = ctx.order(order, "order", 5)?;
            let r = QuantumRing::new(n)?;
            let (names, series) = if fixed {
                let ins = basis_insertions(n, &ins)?;
                let v = fixed_structure(&r, &ins)?;
                (v.insertions.clone(), v.expand(order)?)
            } else {
                let parsed = insertions(n, &ins)?;
                if parsed.len() < 3 {
                    return Err(usage("--insertions: at least three insertions are needed"));
                }
                let strategy = match strategy {
                    Some(StrategyArg::Last) => Strategy::Last,
                    _ => Strategy::First,
                };
                let names = ins.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                (names, multipoint(&r, &parsed, order, strategy)?)
            };
            let coeffs = series.to_strings();
            let json = json!({"n": n, "insertions": names, "order": order, "fixed_structure": fixed, "series": coeffs});
            ctx.emit(json, || series_csv(&coeffs), || series_text(&coeffs, "q"));
        }
        Command::Gw { n, insertions: ins, u_order } => {
            check_n(n)?;
            let u_order = match u_order {
                Some(v) => v,
                None => ctx.config.get_parsed("u-order").map_err(|e| usage(e.to_string()))?.unwrap_or(6),
            };
            let r = QuantumRing::new(n)?;
            let ins = basis_insertions(n, &ins)?;
            if ins.len() < 3 {
                return Err(usage("--insertions: at least three insertions are needed"));
            }
            let g = gw_transform(&r, &ins, u_order)?;
            let terms = g.u_coefficients()?;
            let csv = || {
                let mut out = String::from("u_exponent,coefficient\n");
                for (k, c) in &terms {
                    out.push_str(&format!("{k},\"{c}\"\n"));
                }
                out
            };
            let text = || terms.iter().map(|(k, c)| format!("u^{k}: {c}\n")).collect();
            ctx.emit(g.to_json(), csv, text);
        }
        Command::Jack { lambda, n } => {
            let vectors = match (lambda, n) {
                (Some(l), None) => vec![jack_vector(&partition("--lambda", &l)?)?],
                (None, Some(n)) => {
                    check_n(n)?;
                    jack_basis(n)?
                }
                _ => return Err(usage("give exactly one of --lambda and --n")),
            };
            let json = Value::Array(vectors.iter().map(|j| j.to_json()).collect());
            let csv = || {
                let mut out = String::from("lambda,partition,coefficient\n");
                for j in &vectors {
                    for (mu, c) in j.vector.iter() {
                        out.push_str(&format!("\"{}\",\"{mu}\",\"{c}\"\n", j.lambda));
                    }
                }
                out
            };
            let text = || vectors.iter().map(|j| format!("J{} = {}\n", j.lambda, j.vector)).collect();
            ctx.emit(json, csv, text);
        }
        Command::Qde { n, order, check, params } => {
            check_n(n)?;
            let order = ctx.order(order, "order", 4)?;
            let at = ctx.params(&params)?;
            let f = formal_solution_at(n, order, at.as_ref().map(|(a, b)| (a, b)))?;
            if check {
                f.residual_check().map_err(|e| Failure::Verification(format!("qde residual: {e}")))?;
            }
            let json = f.to_json();
            let csv = || {
                let mut out = String::from("power,row,col,value\n");
                for (d, m) in json["Y"].as_array().expect("array").iter().enumerate() {
                    for (i, row) in m.as_array().expect("array").iter().enumerate() {
                        for (j, v) in row.as_array().expect("array").iter().enumerate() {
                            out.push_str(&format!("{d},{i},{j},\"{}\"\n", v.as_str().unwrap_or_default()));
                        }
                    }
                }
                out
            };
            let text = || {
                (0..=order)
                    .map(|d| format!("Y_{d}:\n{}", text_rows(&json["Y"][d])))
                    .collect::<Vec<_>>()
                    .join("")
            };
            ctx.emit(json.clone(), csv, text);
        }
        Command::Monodromy { n, params, lp, tol } => {
            check_n(n)?;
            let (t1, t2) = ctx.params(&params)?.ok_or_else(|| usage("--t1 and --t2 are required"))?;
            let lp = lp.or_else(|| ctx.config.get("loop").map(str::to_string)).ok_or_else(|| usage("--loop is required"))?;
            let lp: Loop = lp.parse().map_err(|e| usage(format!("--loop: {e}")))?;
            let tol = match tol {
                Some(t) => t,
                None => ctx.config.get_parsed("tol").map_err(|e| usage(e.to_string()))?.unwrap_or(1e-10),
            };
            if !(tol > 0.0 && tol < 1e-2) {
                return Err(usage(format!("--tol: expected a value in (0, 0.01), got {tol}")));
            }
            let r = monodromy_probe(n, &t1, &t2, &lp, tol)?;
            let json = r.to_json();
            let csv = || {
                let mut out = String::from("row,col,re,im\n");
                for i in 0..r.matrix.nrows() {
                    for j in 0..r.matrix.ncols() {
                        out.push_str(&format!("{i},{j},{:e},{:e}\n", r.matrix[(i, j)].re, r.matrix[(i, j)].im));
                    }
                }
                out
            };
            let text = || {
                let mut out = format!("loop: {}\nest_error: {:e}\nflagged: {}\neigenvalues:\n", r.lp, r.est_error, r.flagged);
                for z in &r.eigenvalues {
                    out.push_str(&format!("  {:.12} {:+.12}i\n", z.re, z.im));
                }
                out
            };
            ctx.emit(json, csv, text);
        }
        Command::Singularities { n, params } => {
            check_n(n)?;
            let at = ctx.params(&params)?;
            let s = singularities_at(n, at.as_ref().map(|(a, b)| (a, b)))?;
            let json = Value::Array(
                s.iter()
                    .map(|x| json!({"point": x.to_string(), "position": x.point().map(|(re, im)| json!([re, im]))}))
                    .collect(),
            );
            let csv = || {
                let mut out = String::from("point,re,im\n");
                for x in &s {
                    match x.point() {
                        Some((re, im)) => out.push_str(&format!("\"{x}\",{re:e},{im:e}\n")),
                        None => out.push_str(&format!("\"{x}\",,\n")),
                    }
                }
                out
            };
            ctx.emit(json, csv, || s.iter().map(|x| format!("{x}\n")).collect());
        }
        Command::Verify { suite, max_n } => {
            let suite = suite.or_else(|| ctx.config.get("suite").map(str::to_string)).unwrap_or_else(|| "all".into());
            let suite: Suite = suite.parse().map_err(|e: String| usage(format!("--suite: {e}")))?;
            let max_n = match max_n {
                Some(v) => v,
                None => ctx.config.get_parsed("max-n").map_err(|e| usage(e.to_string()))?.unwrap_or(4),
            };
            if !(1..=8).contains(&max_n) {
                return Err(usage(format!("--max-n: expected 1..=8, got {max_n}")));
            }
            let report = verify::run(suite, max_n);
            let csv = || {
                let mut out = String::from("suite,check,status\n");
                for c in &report.checks {
                    let status = match c.outcome {
                        verify::Outcome::Pass => "pass",
                        verify::Outcome::Fail(_) => "fail",
                        verify::Outcome::Finding(_) => "finding",
                    };
                    out.push_str(&format!("{},\"{}\",{status}\n", c.suite, c.name));
                }
                out
            };
            let text = || report.checks.iter().map(|c| format!("{c}\n")).collect();
            ctx.emit(report.to_json(), csv, text);
            if let Some(f) = report.first_failure() {
                return Err(Failure::Verification(f.to_string()).into());
            }
        }
    }
    Ok(())
}

fn text_rows(m: &Value) -> String {
    m.as_array()
        .map(|rows| {
            rows.iter()
                .map(|r| {
                    let cells: Vec<&str> = r.as_array().map(|c| c.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
                    format!("  {}\n", cells.join(" | "))
                })
                .collect()
        })
        .unwrap_or_default()
}

fn text_matrix(json: &Value) -> String {
    let basis: Vec<&str> = json["basis"].as_array().map(|b| b.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
    let mut out = String::new();
    for (i, mu) in basis.iter().enumerate() {
        for (j, nu) in basis.iter().enumerate() {
            out.push_str(&format!("{mu} <- {nu}: {}\n", json["entries"][i][j].as_str().unwrap_or_default()));
        }
    }
    out
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("HILB_THREADS") else {
        return Ok(());
    };
    let k: usize = v.trim().parse().map_err(|_| usage(format!("HILB_THREADS: `{v}` is not a positive integer")))?;
    if k == 0 {
        bail!(usage("HILB_THREADS must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(k).build_global().context("thread pool")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match init_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<Failure>() {
            Some(Failure::Usage(m)) => {
                eprintln!("error: {m}");
                ExitCode::from(2)
            }
            Some(Failure::Verification(m)) => {
                eprintln!("verification failed: {m}");
                ExitCode::from(1)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}
