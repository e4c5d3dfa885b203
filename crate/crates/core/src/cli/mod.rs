//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams.

pub mod format;
pub mod json;
mod region;

use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::engine::{EngineError, Illuminator, MethodChoice, Options, QueryPoint};
use crate::exactpoly::{multiple_tangent_lines, IsolatingInterval, Line};
use crate::function::Function;
use crate::scalar::{parse_rational, Scalar};
use crate::thetalines::{count_normals, count_theta_lines, explore_conjecture};
use crate::{convexity, Rational};

pub use region::{region_grid, write_csv, Cell, RegionGrid, Rect};

/// Version of the JSON result documents.
pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "illum", version, about = "Count tangent, normal and theta lines through a point")]
struct Cli {
    /// Add the wall time to the result document (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Illumination index of a point.
    Index(QueryArgs),
    /// Illumination index with every tangent line and tangency.
    Tangents(QueryArgs),
    /// Region verdict from the convexity theorems only.
    Classify(ClassifyArgs),
    /// Normal lines through a point.
    Normals(ScanArgs),
    /// Theta lines through a point.
    Theta(ThetaArgs),
    /// Illumination index over a grid of cell centers, as CSV.
    Region(RegionArgs),
    /// Lines tangent to a polynomial graph at two or more points.
    Multitangents(FnArg),
}

#[derive(Args, Debug)]
struct FnArg {
    /// Function of x, e.g. "x*atan(x)" or "x^4 - 2*x^2".
    #[arg(long = "fn", value_name = "EXPR")]
    function: String,
    /// Accepted for compatibility; JSON is always emitted.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[command(flatten)]
    f: FnArg,
    /// Query point; coordinates may be decimals or rationals like 1/2.
    #[arg(long, value_name = "S,T", allow_hyphen_values = true)]
    point: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Numeric scan window: a half-width around s, or LO,HI.
    #[arg(long, value_name = "W", allow_hyphen_values = true)]
    window: Option<String>,
    /// Treat a general expression as convex without proof.
    #[arg(long)]
    assume_convex: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    f: FnArg,
    #[arg(long, value_name = "S,T", allow_hyphen_values = true)]
    point: String,
    #[arg(long)]
    assume_convex: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    f: FnArg,
    #[arg(long, value_name = "S,T", allow_hyphen_values = true)]
    point: String,
    #[arg(long, value_name = "W", allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, default_value_t = 4096)]
    samples: usize,
}

#[derive(Args, Debug)]
struct ThetaArgs {
    #[command(flatten)]
    scan: ScanArgs,
    /// Angle in radians, 0 <= RAD <= pi/2.
    #[arg(long, value_name = "RAD", allow_hyphen_values = true, required_unless_present = "explore")]
    angle: Option<f64>,
    /// Sweep the angle over [0, pi/2] and flag counts of 0.
    #[arg(long)]
    explore: bool,
    /// Number of angle steps in the sweep.
    #[arg(long, default_value_t = 16)]
    steps: usize,
    /// Window doublings tried before a zero count is flagged.
    #[arg(long, default_value_t = 4)]
    doublings: u32,
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[command(flatten)]
    f: FnArg,
    #[arg(long, value_name = "XMIN,XMAX,YMIN,YMAX", allow_hyphen_values = true)]
    rect: String,
    #[arg(long, value_name = "NX,NY")]
    res: String,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "FILE.csv")]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long)]
    assume_convex: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Exact,
    Theorem,
    Numeric,
}

impl MethodArg {
    fn choice(self) -> MethodChoice {
        match self {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Exact => MethodChoice::Exact,
            MethodArg::Theorem => MethodChoice::Theorem,
            MethodArg::Numeric => MethodChoice::Numeric,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodArg::Auto => "auto",
            MethodArg::Exact => "exact",
            MethodArg::Theorem => "theorem",
            MethodArg::Numeric => "numeric",
        }
    }
}

/// A failure mapped to an exit code and a one-line JSON error.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, kind: "usage", message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure { code: EXIT_DOMAIN, kind: "domain", message: message.into() }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::NoCertificate(_) | EngineError::NotPolynomial | EngineError::InvalidWindow { .. } => {
                Failure::usage(e.to_string())
            }
            _ => Failure::domain(e.to_string()),
        }
    }
}

impl From<crate::expr::EvalError> for Failure {
    fn from(e: crate::expr::EvalError) -> Self {
        Failure::domain(e.to_string())
    }
}

#[derive(Serialize)]
struct PointEcho {
    #[serde(serialize_with = "json::rational")]
    s: Rational,
    #[serde(serialize_with = "json::rational")]
    t: Rational,
}

fn parse_function(text: &str) -> Result<Function, Failure> {
    Function::parse(text).map_err(|e| Failure::usage(format!("--fn: {e}")))
}

fn split_numbers<'a>(text: &'a str, flag: &str, count: usize) -> Result<Vec<&'a str>, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != count {
        return Err(Failure::usage(format!("{flag}: expected {count} comma-separated values, got '{text}'")));
    }
    Ok(parts)
}

fn parse_point(text: &str) -> Result<QueryPoint, Failure> {
    let parts = split_numbers(text, "--point", 2)?;
    let coord = |s: &str| parse_rational(s).ok_or_else(|| Failure::usage(format!("--point: bad number '{s}'")));
    Ok(QueryPoint::new(coord(parts[0])?, coord(parts[1])?))
}

fn parse_f64(text: &str, flag: &str) -> Result<f64, Failure> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Failure::usage(format!("{flag}: bad number '{text}'"))),
    }
}

/// `W` (half-width around `s`) or `LO,HI`.
fn parse_window(text: &str, s: f64) -> Result<(f64, f64), Failure> {
    let window = match text.split_once(',') {
        Some((lo, hi)) => (parse_f64(lo.trim(), "--window")?, parse_f64(hi.trim(), "--window")?),
        None => {
            let w = parse_f64(text.trim(), "--window")?;
            (s - w, s + w)
        }
    };
    if !(window.0 < window.1) {
        return Err(Failure::usage(format!("--window: empty interval '{text}'")));
    }
    Ok(window)
}

fn default_window(options: &Options, p: &QueryPoint) -> (f64, f64) {
    (p.s_f64() - options.half_width, p.s_f64() + options.half_width)
}

fn check_off_graph(f: &Function, p: &QueryPoint) -> Result<(), Failure> {
    if crate::engine::point_on_graph(f, p)? {
        return Err(EngineError::OnGraph { s: p.s_f64(), t: p.t_f64() }.into());
    }
    Ok(())
}

fn query_echo(f: &FnArg, p: &QueryPoint, extra: Value) -> Value {
    let mut q = json!({
        "function": f.function,
        "point": PointEcho { s: p.s().clone(), t: p.t().clone() },
    });
    if let (Value::Object(q), Value::Object(extra)) = (&mut q, extra) {
        q.extend(extra);
    }
    q
}

fn cmd_query(args: &QueryArgs, list_lines: bool) -> Result<(Value, Value), Failure> {
    let f = parse_function(&args.f.function)?;
    let p = parse_point(&args.point)?;
    let mut options = Options { method: args.method.choice(), assume_convex: args.assume_convex, ..Options::default() };
    if let Some(w) = &args.window {
        options.window = Some(parse_window(w, p.s_f64())?);
    }
    let echo = query_echo(
        &args.f,
        &p,
        json!({ "method": args.method.name(), "window": options.window, "assume_convex": args.assume_convex }),
    );
    let result = Illuminator::new(f, options).query(&p)?;
    let mut value = json!({
        "index": result.index,
        "method": result.method,
    });
    if list_lines {
        value["lines"] = serde_json::to_value(&result.lines).expect("serializable");
    }
    if let Some(v) = &result.verdict {
        value["verdict"] = serde_json::to_value(v).expect("serializable");
    }
    value["diagnostics"] = json!(result.diagnostics);
    value["window_truncated"] = json!(result.window_truncated);
    Ok((echo, value))
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(Value, Value), Failure> {
    let f = parse_function(&args.f.function)?;
    let p = parse_point(&args.point)?;
    check_off_graph(&f, &p)?;
    let echo = query_echo(&args.f, &p, json!({ "assume_convex": args.assume_convex }));
    let setup = convexity::certify(&f, args.assume_convex).map_err(|e| Failure::usage(e.to_string()))?;
    let verdict = convexity::classify(&f, &setup, p.s(), p.t())?;
    Ok((echo, json!({ "index": verdict.index, "verdict": verdict, "setup": setup })))
}

fn scan_window(args: &ScanArgs, p: &QueryPoint) -> Result<(f64, f64), Failure> {
    match &args.window {
        Some(w) => parse_window(w, p.s_f64()),
        None => Ok(default_window(&Options::default(), p)),
    }
}

fn cmd_normals(args: &ScanArgs) -> Result<(Value, Value), Failure> {
    let f = parse_function(&args.f.function)?;
    let p = parse_point(&args.point)?;
    check_off_graph(&f, &p)?;
    let window = scan_window(args, &p)?;
    let echo = query_echo(&args.f, &p, json!({ "window": window, "samples": args.samples }));
    let count = count_normals(&f, &p, window, args.samples.max(2))?;
    Ok((echo, serde_json::to_value(count).expect("serializable")))
}

fn cmd_theta(args: &ThetaArgs) -> Result<(Value, Value), Failure> {
    let f = parse_function(&args.scan.f.function)?;
    let p = parse_point(&args.scan.point)?;
    check_off_graph(&f, &p)?;
    let window = scan_window(&args.scan, &p)?;
    let samples = args.scan.samples.max(2);
    if args.explore {
        let steps = args.steps.max(1);
        let angles: Vec<f64> = (0..=steps).map(|i| FRAC_PI_2 * i as f64 / steps as f64).collect();
        let echo = query_echo(
            &args.scan.f,
            &p,
            json!({ "window": window, "samples": samples, "explore": true, "steps": steps, "doublings": args.doublings }),
        );
        let entries = explore_conjecture(&f, &p, &angles, window, samples, args.doublings)?;
        let flagged = entries.iter().filter(|e| e.candidate_counterexample).count();
        return Ok((echo, json!({ "entries": entries, "candidates": flagged })));
    }
    let angle = args.angle.expect("required by clap");
    if !(0.0..=FRAC_PI_2).contains(&angle) {
        return Err(Failure::usage(format!("--angle: {angle} is outside [0, pi/2]")));
    }
    let echo = query_echo(&args.scan.f, &p, json!({ "angle": angle, "window": window, "samples": samples }));
    let count = count_theta_lines(&f, &p, angle, window, samples)?;
    Ok((echo, serde_json::to_value(count).expect("serializable")))
}

#[derive(Serialize)]
struct IntervalOut<'a> {
    #[serde(serialize_with = "json::rational")]
    lo: &'a Rational,
    #[serde(serialize_with = "json::rational")]
    hi: &'a Rational,
    approx: f64,
}

#[derive(Serialize)]
struct MultitangentOut<'a> {
    line: &'a Line,
    abscissae: Vec<IntervalOut<'a>>,
}

fn interval_out(iv: &IsolatingInterval) -> IntervalOut<'_> {
    IntervalOut { lo: &iv.lo, hi: &iv.hi, approx: ((&iv.lo + &iv.hi) / Rational::from_integer(2.into())).to_f64() }
}

fn cmd_multitangents(args: &FnArg) -> Result<(Value, Value), Failure> {
    let f = parse_function(&args.function)?;
    let poly = f
        .as_polynomial()
        .ok_or_else(|| Failure::domain("multitangents requires a polynomial with rational coefficients"))?;
    let set = multiple_tangent_lines(poly).map_err(|e| Failure::domain(e.to_string()))?;
    let records: Vec<MultitangentOut> = set
        .records
        .iter()
        .map(|r| MultitangentOut { line: &r.line, abscissae: r.abscissae.iter().map(interval_out).collect() })
        .collect();
    let echo = json!({ "function": args.function });
    Ok((echo, json!({ "count": records.len(), "lines": records })))
}

fn cmd_region(args: &RegionArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let f = parse_function(&args.f.function)?;
    let r = split_numbers(&args.rect, "--rect", 4)?;
    let rect = Rect {
        xmin: parse_f64(r[0], "--rect")?,
        xmax: parse_f64(r[1], "--rect")?,
        ymin: parse_f64(r[2], "--rect")?,
        ymax: parse_f64(r[3], "--rect")?,
    };
    if !(rect.xmin < rect.xmax && rect.ymin < rect.ymax) {
        return Err(Failure::usage("--rect: degenerate rectangle"));
    }
    let res = split_numbers(&args.res, "--res", 2)?;
    let dim = |s: &str| match s.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(Failure::usage(format!("--res: expected an integer >= 2, got '{s}'"))),
    };
    let (nx, ny) = (dim(res[0])?, dim(res[1])?);
    let options = Options { method: args.method.choice(), assume_convex: args.assume_convex, ..Options::default() };
    let illuminator = Illuminator::new(f, options);
    let threads = std::env::var("ILLUM_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    let grid = region_grid(&illuminator, rect, nx, ny, threads);
    let io = |e: std::io::Error| Failure::domain(format!("write failed: {e}"));
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(io)?;
            let mut w = std::io::BufWriter::new(file);
            write_csv(&grid, &mut w).map_err(io)?;
            w.flush().map_err(io)?;
        }
        None => write_csv(&grid, out).map_err(io)?,
    }
    Ok(())
}

fn emit_error(err: &mut dyn Write, failure: &Failure) -> i32 {
    let line = json!({ "error": { "kind": failure.kind, "code": failure.code, "message": failure.message } });
    let _ = writeln!(err, "{line}");
    failure.code
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return emit_error(err, &Failure::usage(first));
        }
    };
    let started = Instant::now();
    let (command, outcome) = match &cli.command {
        Command::Index(a) => ("index", cmd_query(a, false)),
        Command::Tangents(a) => ("tangents", cmd_query(a, true)),
        Command::Classify(a) => ("classify", cmd_classify(a)),
        Command::Normals(a) => ("normals", cmd_normals(a)),
        Command::Theta(a) => ("theta", cmd_theta(a)),
        Command::Multitangents(a) => ("multitangents", cmd_multitangents(a)),
        Command::Region(a) => {
            return match cmd_region(a, out) {
                Ok(()) => EXIT_OK,
                Err(f) => emit_error(err, &f),
            };
        }
    };
    match outcome {
        Ok((query, result)) => {
            let mut doc = json!({
                "version": SCHEMA_VERSION,
                "command": command,
                "query": query,
                "result": result,
            });
            if cli.timing {
                doc["wall_time_ms"] = json!(started.elapsed().as_secs_f64() * 1e3);
            }
            let _ = writeln!(out, "{doc}");
            EXIT_OK
        }
        Err(f) => emit_error(err, &f),
    }
}
