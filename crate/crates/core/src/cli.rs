//! Command-line front end. Exit status: 0 success, 1 computation error or a
//! failing required check, 2 usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{self, Config, Suite};
use crate::error::Error;
use crate::eulersum::{self, Estimate, DEFAULT_TERMS};
use crate::faulhaber::{bernoulli_table, coeffs};
use crate::hyperharmonic::{hyper, hyper_table, HyperSpec};
use crate::tengine::{build, verify_lemma_structure, Pattern};

#[derive(Parser, Debug)]
#[command(name = "altharm", version, about = "Generalized alternating hyperharmonic numbers and their Euler sums")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Reduced,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Conjectures,
    Remarks,
    Lemmas,
    Bounds,
    Reduction,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bernoulli numbers B_0..B_max (B_1 = +1/2)
    Bernoulli {
        #[arg(long, default_value_t = 20)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Truncated power-sum coefficients c, d, e, c1, d1 for m = 0..=max
    Faulhaber {
        #[arg(long, default_value_t = 5)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Kernel polynomial T(n, t, r, s1, s2)
    Tpoly {
        #[arg(long)]
        s1: u32,
        #[arg(long)]
        s2: u32,
        #[arg(long)]
        r: u32,
        /// Evaluate at n and t
        #[arg(long, num_args = 2, value_names = ["N", "T"], allow_negative_numbers = true)]
        eval: Option<Vec<i64>>,
        /// Check the level-by-level structure up to r
        #[arg(long)]
        verify_lemmas: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// H_n^(p,r,s1,s2) as an exact rational
    Hh {
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s1: u32,
        #[arg(long)]
        s2: u32,
        #[arg(long)]
        n: usize,
        /// Emit n = 1..N as CSV
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// sum_n H_n^(p,r,s1,s2) / n^q, directly and through classical sums
    Eulersum {
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s1: u32,
        #[arg(long)]
        s2: u32,
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// sum_n prod_i H_n^(factor_i) / n^q
    Product {
        /// p,r,s1,s2 (repeatable)
        #[arg(long = "factor", required = true, allow_hyphen_values = true)]
        factors: Vec<String>,
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run validation suites
    Check {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 12)]
        rmax: u32,
        /// Semicolon-separated patterns, e.g. "2,1;1,2"
        #[arg(long)]
        patterns: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(Error),
    /// Output already written; a required check failed.
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (including the program name) and writes to the given sinks.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::ChecksFailed) => 1,
    }
}

fn pattern(s1: u32, s2: u32) -> std::result::Result<Pattern, Failure> {
    Pattern::new(s1, s2).map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

/// Pretty JSON with sorted keys (serde_json maps are ordered) and a trailing newline.
fn emit_json(out: &mut dyn Write, v: &Value) -> Outcome {
    emit(out, &format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn estimate_json(e: &Estimate) -> Value {
    json!({ "value": round12(e.value), "err_est": round12(e.err_est) })
}

fn no_csv(cmd: &str) -> Failure {
    Failure::Usage(format!("{cmd} does not support --format csv"))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Bernoulli { max, format } => bernoulli_cmd(max, format, out),
        Command::Faulhaber { max, format } => faulhaber_cmd(max, format, out),
        Command::Tpoly { s1, s2, r, eval, verify_lemmas, format } => {
            tpoly_cmd(pattern(s1, s2)?, r, eval, verify_lemmas, format, out)
        }
        Command::Hh { p, r, s1, s2, n, table, format } => hh_cmd(HyperSpec::new(p, r, pattern(s1, s2)?), n, table, format, out),
        Command::Eulersum { p, r, s1, s2, q, method, terms, format } => {
            eulersum_cmd(HyperSpec::new(p, r, pattern(s1, s2)?), q, method, terms, format, out)
        }
        Command::Product { factors, q, method, terms, format } => {
            let specs = factors.iter().map(|f| parse_factor(f)).collect::<std::result::Result<Vec<_>, _>>()?;
            product_cmd(&specs, q, method, terms, format, out)
        }
        Command::Check { suite, rmax, patterns, jobs, format } => check_cmd(suite, rmax, patterns, jobs, format, out),
    }
}

fn bernoulli_cmd(max: usize, format: Format, out: &mut dyn Write) -> Outcome {
    let table = bernoulli_table(max);
    match format {
        Format::Json => {
            let rows: Vec<Value> = table.iter().enumerate().map(|(n, b)| json!({ "n": n, "value": b.to_string() })).collect();
            emit_json(out, &json!({ "bernoulli": rows }))
        }
        Format::Csv => {
            let mut s = String::from("n,value\n");
            for (n, b) in table.iter().enumerate() {
                s += &format!("{n},{b}\n");
            }
            emit(out, &s)
        }
        Format::Text => {
            let s: String = table.iter().enumerate().map(|(n, b)| format!("B_{n} = {b}\n")).collect();
            emit(out, &s)
        }
    }
}

fn faulhaber_cmd(max: usize, format: Format, out: &mut dyn Write) -> Outcome {
    // one row per (m, j), j = 0..=m+1; families undefined at a given j are left empty
    let mut rows = Vec::new();
    for m in 0..=max {
        let c = coeffs(m);
        for j in 0..=m + 1 {
            let upper = (1..=m + 1).contains(&j);
            let lower = j <= m;
            let cells = [
                upper.then(|| c.c(j).to_string()),
                upper.then(|| c.d(j).to_string()),
                (j == 0).then(|| c.e0.to_string()),
                lower.then(|| c.c1(j).to_string()),
                lower.then(|| c.d1(j).to_string()),
            ];
            rows.push(((m, j), cells));
        }
    }
    const NAMES: [&str; 5] = ["c", "d", "e", "c1", "d1"];
    match format {
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|((m, j), row)| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("m".into(), json!(m));
                    obj.insert("j".into(), json!(j));
                    for (name, v) in NAMES.iter().zip(row) {
                        if let Some(v) = v {
                            obj.insert((*name).into(), json!(v));
                        }
                    }
                    Value::Object(obj)
                })
                .collect();
            emit_json(out, &json!({ "coefficients": list }))
        }
        Format::Csv | Format::Text => {
            let mut s = String::from("m,j,c,d,e,c1,d1\n");
            for ((m, j), row) in &rows {
                let cells: Vec<&str> = row.iter().map(|v| v.as_deref().unwrap_or("")).collect();
                s += &format!("{m},{j},{}\n", cells.join(","));
            }
            emit(out, &s)
        }
    }
}

fn tpoly_cmd(
    pattern: Pattern,
    r: u32,
    eval: Option<Vec<i64>>,
    verify_lemmas: bool,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    if r == 0 {
        return Err(Failure::Usage("--r must be at least 1".into()));
    }
    let poly = build(pattern, r);
    let value = match eval.as_deref() {
        Some(&[n, t]) => {
            if n < 1 || t < 1 {
                return Err(Failure::Usage("--eval needs n, t >= 1".into()));
            }
            Some(poly.evaluate(n, t))
        }
        _ => None,
    };
    let report = verify_lemmas.then(|| verify_lemma_structure(pattern, r));
    let failed = report.as_ref().is_some_and(|rep| !rep.passed());
    match format {
        Format::Json => {
            let mut v = to_value(&poly.to_wire());
            v["f"] = json!(pattern.degree(r));
            v["sectors"] = json!(poly.sectors().iter().map(|s| s.index()).collect::<Vec<_>>());
            if let (Some(ev), Some(val)) = (eval.as_deref(), &value) {
                v["eval"] = json!({ "n": ev[0], "t": ev[1], "value": val.to_string() });
            }
            if let Some(rep) = &report {
                v["lemmas"] = to_value(rep);
            }
            emit_json(out, &v)?;
        }
        Format::Csv => {
            let mut s = String::from("m,j,k,coef\n");
            for t in poly.to_wire().terms {
                s += &format!("{},{},{},{}\n", t.m, t.j, t.k, t.coef);
            }
            emit(out, &s)?;
        }
        Format::Text => {
            let mut s = format!("{}\n", poly.render_text());
            if let (Some(ev), Some(val)) = (eval.as_deref(), &value) {
                s += &format!("T({}, {}) = {val}\n", ev[0], ev[1]);
            }
            if let Some(rep) = &report {
                s += &format!("{rep}\n");
            }
            emit(out, &s)?;
        }
    }
    if failed {
        return Err(Failure::ChecksFailed);
    }
    Ok(())
}

fn hh_cmd(spec: HyperSpec, n: usize, table: bool, format: Format, out: &mut dyn Write) -> Outcome {
    if spec.r == 0 || n == 0 {
        return Err(Failure::Usage("--r and --n must be at least 1".into()));
    }
    if table {
        if format == Format::Json {
            let rows: Vec<Value> =
                hyper_table(&spec, n).iter().enumerate().map(|(i, v)| json!({ "n": i + 1, "value": v.to_string() })).collect();
            return emit_json(out, &json!({ "table": rows }));
        }
        let mut s = String::from("n,value\n");
        for (i, v) in hyper_table(&spec, n).iter().enumerate() {
            s += &format!("{},{v}\n", i + 1);
        }
        return emit(out, &s);
    }
    let value = hyper(&spec, n);
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "p": spec.p, "r": spec.r, "s1": spec.pattern.s1, "s2": spec.pattern.s2,
                "n": n, "value": value.to_string(),
            }),
        ),
        Format::Csv => emit(out, &format!("n,value\n{n},{value}\n")),
        Format::Text => emit(out, &format!("{value}\n")),
    }
}

fn sig12(x: f64) -> String {
    format!("{}", round12(x))
}

fn eulersum_cmd(spec: HyperSpec, q: f64, method: Method, terms: usize, format: Format, out: &mut dyn Write) -> Outcome {
    if spec.r == 0 {
        return Err(Failure::Usage("--r must be at least 1".into()));
    }
    if format == Format::Csv {
        return Err(no_csv("eulersum"));
    }
    let red = eulersum::reduce(&spec, q)?;
    let reduced = match method {
        Method::Reduced | Method::Both => Some(eulersum::eval_reduction_with(&red, f64::INFINITY, eulersum::capped_terms(terms))?),
        Method::Direct => None,
    };
    let direct = match method {
        Method::Direct | Method::Both => Some(eulersum::eval_direct(&spec, q, terms)?),
        Method::Reduced => None,
    };
    let diff = match (&direct, &reduced) {
        (Some(d), Some(r)) => Some(Estimate { value: (d.value - r.value).abs(), err_est: d.err_est + r.err_est }),
        _ => None,
    };
    match format {
        Format::Json => {
            let mut v = json!({ "terms": to_value(&red.terms), "below_hypothesis": red.below_hypothesis });
            if let Some(d) = &direct {
                v["direct"] = estimate_json(d);
            }
            if let Some(r) = &reduced {
                v["reduced"] = estimate_json(r);
            }
            if let Some(d) = &diff {
                v["abs_diff"] = estimate_json(d);
            }
            emit_json(out, &v)
        }
        _ => {
            let mut s = String::new();
            for t in &red.terms {
                s += &format!("{t}\n");
            }
            for (name, e) in [("direct", &direct), ("reduced", &reduced), ("abs_diff", &diff)] {
                if let Some(e) = e {
                    s += &format!("{name} = {} ± {:.1e}\n", sig12(e.value), e.err_est);
                }
            }
            emit(out, &s)
        }
    }
}

fn parse_factor(s: &str) -> std::result::Result<HyperSpec, Failure> {
    let bad = || Failure::Usage(format!("--factor expects p,r,s1,s2 (got {s:?})"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [p, r, s1, s2] = parts[..] else { return Err(bad()) };
    let p: i64 = p.parse().map_err(|_| bad())?;
    let r: u32 = r.parse().map_err(|_| bad())?;
    if r == 0 {
        return Err(bad());
    }
    Ok(HyperSpec::new(p, r, pattern(s1.parse().map_err(|_| bad())?, s2.parse().map_err(|_| bad())?)?))
}

fn product_cmd(specs: &[HyperSpec], q: f64, method: Method, terms: usize, format: Format, out: &mut dyn Write) -> Outcome {
    if format == Format::Csv {
        return Err(no_csv("product"));
    }
    let expanded = eulersum::expand_product(specs, q)?;
    let reduced = match method {
        Method::Reduced | Method::Both => Some(eulersum::eval_nonlinear(&expanded, q, terms)?),
        Method::Direct => None,
    };
    let direct = match method {
        Method::Direct | Method::Both => Some(eulersum::eval_direct_product(specs, q, terms)?),
        Method::Reduced => None,
    };
    let diff = match (&direct, &reduced) {
        (Some(d), Some(r)) => Some(Estimate { value: (d.value - r.value).abs(), err_est: d.err_est + r.err_est }),
        _ => None,
    };
    match format {
        Format::Json => {
            let mut v = json!({ "terms": to_value(&expanded) });
            if let Some(d) = &direct {
                v["direct"] = estimate_json(d);
            }
            if let Some(r) = &reduced {
                v["reduced"] = estimate_json(r);
            }
            if let Some(d) = &diff {
                v["abs_diff"] = estimate_json(d);
            }
            emit_json(out, &v)
        }
        _ => {
            let mut s = String::new();
            for t in &expanded {
                s += &format!("{}\n", t.label());
            }
            for (name, e) in [("direct", &direct), ("reduced", &reduced), ("abs_diff", &diff)] {
                if let Some(e) = e {
                    s += &format!("{name} = {} ± {:.1e}\n", sig12(e.value), e.err_est);
                }
            }
            emit(out, &s)
        }
    }
}

fn parse_patterns(s: &str) -> std::result::Result<Vec<Pattern>, Failure> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<Pattern>().map_err(|e| Failure::Usage(format!("bad pattern {p:?}: {e}"))))
        .collect()
}

fn check_cmd(
    suite: SuiteArg,
    rmax: u32,
    patterns: Option<String>,
    jobs: usize,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    if format == Format::Csv {
        return Err(no_csv("check"));
    }
    let mut config = Config { r_max: rmax, jobs: jobs.max(1), ..Config::default() };
    if let Some(p) = patterns {
        config.patterns = parse_patterns(&p)?;
    }
    config.suites = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Conjectures => vec![Suite::Conjectures],
        SuiteArg::Remarks => vec![Suite::Remarks],
        SuiteArg::Lemmas => vec![Suite::Lemmas],
        SuiteArg::Bounds => vec![Suite::Bounds],
        SuiteArg::Reduction => vec![Suite::Reduction],
    };
    let reports = analysis::run_all(&config);
    let ok = analysis::all_required_pass(&reports);
    match format {
        Format::Json => emit_json(out, &json!({ "reports": to_value(&reports), "all_required_pass": ok }))?,
        _ => {
            let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
            s += &format!("{} reports, required checks {}\n", reports.len(), if ok { "pass" } else { "FAIL" });
            emit(out, &s)?;
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("altharm").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bernoulli_table_text() {
        let (code, out, _) = run(&["bernoulli", "--max", "10"]);
        assert_eq!(code, 0);
        assert!(out.contains("B_1 = 1/2\n"));
        assert!(out.ends_with("B_10 = 5/66\n"));
    }

    #[test]
    fn tpoly_text_rendering() {
        let (code, out, _) = run(&["tpoly", "--s1", "2", "--s2", "1", "--r", "3", "--format", "text"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1/2·n^2 + (−t+3/2)·n + 1/2·t^2 − 3/2·t + 1\n");
    }

    #[test]
    fn tpoly_json_has_degree_and_sectors() {
        let (code, out, _) = run(&["tpoly", "--s1", "2", "--s2", "1", "--r", "4", "--eval", "5", "2", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["f"], json!(2));
        assert_eq!(v["sectors"], json!([2, 3]));
        assert!(v["terms"].as_array().unwrap().iter().all(|t| t["coef"].is_string()));
        assert!(v["eval"]["value"].is_string());
    }

    #[test]
    fn hh_exact_value() {
        let (code, out, _) = run(&["hh", "--p", "1", "--r", "1", "--s1", "1", "--s2", "0", "--n", "4"]);
        assert_eq!((code, out.as_str()), (0, "25/12\n"));
        let (code, out, _) = run(&["hh", "--p", "1", "--r", "2", "--s1", "1", "--s2", "1", "--n", "3", "--table"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
    }

    #[test]
    fn eulersum_json_is_deterministic_and_annotated() {
        let args = ["eulersum", "--p", "1", "--r", "1", "--s1", "1", "--s2", "0", "--q", "2", "--method", "both", "--terms", "20000"];
        let (code, a, _) = run(&args);
        let (_, b, _) = run(&args);
        assert_eq!(code, 0);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        for key in ["direct", "reduced", "abs_diff"] {
            assert!(v[key]["err_est"].is_number(), "{key}");
        }
        assert!((v["direct"]["value"].as_f64().unwrap() - 2.404114).abs() < 1e-6);
        assert_eq!(v["terms"][0]["s1"], json!("+"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["bernoulli", "--bogus"]).0, 2);
        assert_eq!(run(&["tpoly", "--s1", "0", "--s2", "0", "--r", "2"]).0, 2);
        assert_eq!(run(&["product", "--factor", "1,2", "--q", "8"]).0, 2);
        // divergent series is a computation error
        assert_eq!(run(&["eulersum", "--p", "1", "--r", "1", "--s1", "1", "--s2", "0", "--q", "1"]).0, 1);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn empty_pattern_list_checks_nothing() {
        let (code, out, _) = run(&["check", "--patterns", "", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["reports"], json!([]));
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(2.404_113_806_319_188_5), 2.40411380632);
        assert_eq!(round12(0.0), 0.0);
    }
}
