//! Command-line front end. The binary is a thin wrapper around [`run`], so
//! everything here can be driven in-process.

use std::fs;
use std::io::{IsTerminal, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Number;

use crate::catalog::PoincarePoly;
use crate::dsl;
use crate::error::Error;
use crate::pipelines::{
    evaluate, pipeline_for, verify_suite, Compactification, Grid, Mode, ModuliKey, Suite,
    SuiteReport,
};
use crate::polyring::IntPoly;
use crate::surgery::TraceRecord;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ARITHMETIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "grbetti",
    version,
    about = "Betti numbers of compactified spaces of conics and twisted cubics in Grassmannians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Poincaré polynomial and Betti numbers of one space.
    Betti(BettiArgs),
    /// One record per n over a range.
    Table(TableArgs),
    /// Run the verification suites over a (k, n) grid.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Color {
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CompactificationArg {
    #[value(name = "M")]
    M,
    #[value(name = "S")]
    S,
    #[value(name = "H")]
    H,
}

impl From<CompactificationArg> for Compactification {
    fn from(c: CompactificationArg) -> Self {
        match c {
            CompactificationArg::M => Compactification::M,
            CompactificationArg::S => Compactification::S,
            CompactificationArg::H => Compactification::H,
        }
    }
}

#[derive(Debug, Args)]
struct BettiArgs {
    /// Space expression, e.g. "blowup(P(2), P(0), 2)" or "S(Gr(1,3),3)".
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    k: Option<i64>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long, value_enum)]
    compactification: Option<CompactificationArg>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Include the surgery trace (S and H only).
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value = "auto")]
    color: Color,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    d: i64,
    #[arg(long, value_enum)]
    compactification: CompactificationArg,
    #[arg(long)]
    k: i64,
    /// Inclusive range, e.g. 4..10.
    #[arg(long, value_parser = parse_range)]
    n: RangeInclusive<i64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value = "auto")]
    color: Color,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Duality,
    Pipeline,
    Special,
    Symmetry,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all", value_delimiter = ',')]
    suite: Vec<SuiteArg>,
    #[arg(long, default_value = "k=1..4,n=k+1..10")]
    grid: String,
    /// Also write the full report as JSON to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok(parse(lo)?..=parse(hi)?),
        None => {
            let v = parse(s)?;
            Ok(v..=v)
        }
    }
}

/// One serialized space.
#[derive(Clone, Debug, Serialize)]
pub struct BettiRecord {
    pub space: String,
    pub k: Option<i64>,
    pub n: Option<i64>,
    pub d: Option<i64>,
    pub compactification: Option<&'static str>,
    /// `-1` for the empty space.
    pub dim: i64,
    pub euler: Number,
    pub q_coefficients: Vec<Number>,
    pub betti: Vec<Number>,
    pub palindromic: bool,
    pub components: Number,
    pub trace: Option<Vec<TraceJson>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceJson {
    pub label: String,
    pub kind: &'static str,
    pub correction: Vec<Number>,
    pub cumulative: Vec<Number>,
}

fn number(b: &BigInt) -> Number {
    b.to_string()
        .parse()
        .expect("decimal integers are valid JSON numbers")
}

fn numbers(p: &IntPoly) -> Vec<Number> {
    p.coeffs().iter().map(number).collect()
}

impl BettiRecord {
    pub fn new(space: String, key: Option<&ModuliKey>, p: &PoincarePoly) -> Self {
        BettiRecord {
            space,
            k: key.map(|k| k.k),
            n: key.map(|k| k.n),
            d: key.map(|k| k.d),
            compactification: key.map(|k| k.compactification.as_str()),
            dim: p.dim().map_or(-1, |d| d as i64),
            euler: number(&p.euler()),
            q_coefficients: numbers(p.poly()),
            betti: p.betti().iter().map(number).collect(),
            palindromic: p.is_palindromic(),
            components: number(&p.components()),
            trace: None,
        }
    }

    pub fn with_trace(mut self, trace: &[TraceRecord]) -> Self {
        self.trace = Some(
            trace
                .iter()
                .map(|t| TraceJson {
                    label: t.label.clone(),
                    kind: t.kind.as_str(),
                    correction: numbers(&t.correction),
                    cumulative: numbers(&t.cumulative),
                })
                .collect(),
        );
        self
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }
}

fn to_sorted_json<T: Serialize>(v: &T) -> String {
    // `Value` maps are BTreeMaps, so this sorts every object's keys.
    let value = serde_json::to_value(v).expect("records serialize");
    serde_json::to_string_pretty(&value).expect("values serialize")
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_arithmetic() {
            EXIT_ARITHMETIC
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("i/o error: {e}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("csv error: {e}"),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code; never panics on user input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Betti(a) => cmd_betti(a, out, err),
        Command::Table(a) => cmd_table(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn use_color(c: Color) -> bool {
    match c {
        Color::Always => true,
        Color::Never => false,
        Color::Auto => std::io::stdout().is_terminal(),
    }
}

fn keyed_record(key: &ModuliKey, trace: bool) -> Result<BettiRecord, Error> {
    let p = evaluate(key, Mode::Closed)?;
    let space = format!(
        "{}(Gr({},{}),{})",
        key.compactification, key.k, key.n, key.d
    );
    let mut record = BettiRecord::new(space, Some(key), &p);
    if trace {
        if let Some(pipeline) = pipeline_for(key)? {
            record = record.with_trace(&pipeline.run()?.trace);
        }
    }
    Ok(record)
}

fn cmd_betti(a: BettiArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<i32, Failure> {
    let triple = (a.k, a.n, a.d, a.compactification);
    let record = match (&a.space, triple) {
        (Some(text), (None, None, None, None)) => {
            let expr = dsl::parse(text).map_err(Error::from)?;
            let p = dsl::eval(&expr)?;
            BettiRecord::new(expr.to_string(), None, &p)
        }
        (None, (Some(k), Some(n), Some(d), Some(c))) => {
            let key = ModuliKey::new(k, n, d, c.into())?;
            keyed_record(&key, a.trace)?
        }
        _ => {
            return Err(usage(
                "give either --space EXPR or all of --k, --n, --d and --compactification",
            ))
        }
    };
    match a.format {
        Format::Json => writeln!(out, "{}", record.to_json())?,
        Format::Csv => write_csv(std::slice::from_ref(&record), out)?,
        Format::Text => write_text(&record, use_color(a.color), out)?,
    }
    Ok(EXIT_OK)
}

fn write_text(r: &BettiRecord, color: bool, out: &mut dyn Write) -> std::io::Result<()> {
    let (bold, reset) = if color {
        ("\x1b[1m", "\x1b[0m")
    } else {
        ("", "")
    };
    let q = IntPoly::new(
        r.q_coefficients
            .iter()
            .map(|c| c.to_string().parse().expect("integer"))
            .collect(),
    );
    writeln!(out, "{bold}{}{reset}", r.space)?;
    writeln!(out, "  P(q)        = {q}")?;
    writeln!(out, "  dim         = {}", r.dim)?;
    writeln!(out, "  euler       = {}", r.euler)?;
    writeln!(out, "  components  = {}", r.components)?;
    writeln!(out, "  palindromic = {}", r.palindromic)?;
    let betti: Vec<String> = r.betti.iter().map(Number::to_string).collect();
    writeln!(out, "  betti       = [{}]", betti.join(", "))?;
    if let Some(trace) = &r.trace {
        writeln!(out, "  trace:")?;
        for t in trace {
            let cumulative: Vec<String> = t.cumulative.iter().map(Number::to_string).collect();
            writeln!(
                out,
                "    {:<8} {:<9} [{}]",
                t.label,
                t.kind,
                cumulative.join(", ")
            )?;
        }
    }
    Ok(())
}

fn write_csv(records: &[BettiRecord], out: &mut dyn Write) -> Result<(), Failure> {
    let width = records
        .iter()
        .map(|r| r.q_coefficients.len())
        .max()
        .unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["k", "n", "d", "compactification", "dim", "euler"]
        .map(String::from)
        .to_vec();
    header.extend((0..width).map(|j| format!("b{}", 2 * j)));
    w.write_record(&header)?;
    let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        let mut row = vec![
            opt(r.k),
            opt(r.n),
            opt(r.d),
            r.compactification.unwrap_or_default().to_owned(),
            r.dim.to_string(),
            r.euler.to_string(),
        ];
        row.extend((0..width).map(|j| {
            r.q_coefficients
                .get(j)
                .map_or_else(|| "0".to_owned(), Number::to_string)
        }));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_table(a: TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let c: Compactification = a.compactification.into();
    let mut keys = Vec::new();
    for n in a.n.clone() {
        match ModuliKey::new(a.k, n, a.d, c) {
            Ok(key) => keys.push(key),
            Err(e) => writeln!(err, "note: skipping {c}(Gr({},{n}),{}): {e}", a.k, a.d)?,
        }
    }
    let records = keys
        .par_iter()
        .map(|key| keyed_record(key, a.trace))
        .collect::<Result<Vec<_>, _>>()?;

    let mut buf: Vec<u8> = Vec::new();
    match a.format {
        Format::Json => writeln!(buf, "{}", to_sorted_json(&records))?,
        Format::Csv => write_csv(&records, &mut buf)?,
        Format::Text => {
            let color = a.out.is_none() && use_color(a.color);
            for r in &records {
                write_text(r, color, &mut buf)?;
            }
        }
    }
    match &a.out {
        Some(path) => fs::write(path, &buf)?,
        None => out.write_all(&buf)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CheckJson<'a> {
    suite: &'static str,
    subject: &'a str,
    passed: bool,
    detail: Option<&'a str>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    checks: Vec<CheckJson<'a>>,
    passed: usize,
    failed: usize,
}

fn report_json(report: &SuiteReport) -> String {
    to_sorted_json(&ReportJson {
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                suite: c.suite.as_str(),
                subject: &c.subject,
                passed: c.passed,
                detail: c.detail.as_deref(),
            })
            .collect(),
        passed: report.passed(),
        failed: report.failed(),
    })
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<i32, Failure> {
    let grid: Grid = a.grid.parse()?;
    let mut suites = Vec::new();
    for s in &a.suite {
        match s {
            SuiteArg::All => suites.extend(Suite::ALL),
            SuiteArg::Duality => suites.push(Suite::Duality),
            SuiteArg::Pipeline => suites.push(Suite::Pipeline),
            SuiteArg::Special => suites.push(Suite::Special),
            SuiteArg::Symmetry => suites.push(Suite::Symmetry),
        }
    }
    suites.sort_unstable();
    suites.dedup();
    let report = verify_suite(&grid, &suites);

    writeln!(out, "grid {} ({} keys)", a.grid, grid.keys().len())?;
    for suite in &suites {
        let total = report.count(*suite);
        let failed = report.failures().filter(|c| c.suite == *suite).count();
        writeln!(
            out,
            "  {:<9} {:>4} checks, {failed} failed",
            suite.as_str(),
            total
        )?;
    }
    for f in report.failures() {
        writeln!(
            out,
            "FAIL [{}] {}: {}",
            f.suite.as_str(),
            f.subject,
            f.detail.as_deref().unwrap_or("")
        )?;
    }
    if let Some(path) = &a.json {
        fs::write(path, report_json(&report) + "\n")?;
    }
    writeln!(
        out,
        "{} checks, {} failures",
        report.checks.len(),
        report.failed()
    )?;
    Ok(if report.failed() == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("grbetti").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn betti_space_text() {
        let (code, out, _) = call(&["betti", "--space", "Gr(2,4)", "--color", "never"]);
        assert_eq!(code, 0);
        assert!(out.contains("1 + q + 2q^2 + q^3 + q^4"), "{out}");
        assert!(out.contains("euler       = 6"));
    }

    #[test]
    fn betti_json_record() {
        let (code, out, _) = call(&[
            "betti",
            "--k",
            "1",
            "--n",
            "3",
            "--d",
            "3",
            "--compactification",
            "S",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            v["q_coefficients"],
            serde_json::json!([1, 2, 3, 3, 3, 3, 3, 2, 1])
        );
        assert_eq!(v["dim"], serde_json::json!(8));
        assert_eq!(v["euler"], serde_json::json!(21));
        assert_eq!(v["betti"].as_array().unwrap().len(), 17);
        assert_eq!(v["trace"], serde_json::Value::Null);
        assert_eq!(v["compactification"], "S");
    }

    #[test]
    fn betti_trace() {
        let (code, out, _) = call(&[
            "betti",
            "--k",
            "1",
            "--n",
            "4",
            "--d",
            "2",
            "--compactification",
            "S",
            "--format",
            "json",
            "--trace",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let trace = v["trace"].as_array().unwrap();
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[0]["kind"], "blowup");
        assert_eq!(trace[1]["cumulative"], v["q_coefficients"]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["betti", "--space", "Gr(2 4)"]).0, EXIT_USAGE);
        assert_eq!(call(&["betti"]).0, EXIT_USAGE);
        assert_eq!(
            call(&["betti", "--space", "P(1)", "--k", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        let (code, _, err) = call(&["betti", "--space", "blowdown(P(1), P(0), P(2))"]);
        assert_eq!(code, EXIT_ARITHMETIC);
        assert!(err.contains("negative Betti"), "{err}");
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn table_csv_and_skips() {
        let (code, out, _) = call(&[
            "table",
            "--d",
            "2",
            "--compactification",
            "S",
            "--k",
            "1",
            "--n",
            "3..5",
            "--format",
            "csv",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("k,n,d,compactification,dim,euler,b0,b2,b4"));
        assert!(
            lines[1].starts_with("1,3,2,S,5,6,1,1,1,1,1,1"),
            "{}",
            lines[1]
        );

        let (code, out, err) = call(&[
            "table",
            "--d",
            "3",
            "--compactification",
            "H",
            "--k",
            "1",
            "--n",
            "3..5",
        ]);
        assert_eq!(code, 0);
        assert!(err.contains("skipping H(Gr(1,3),3)"), "{err}");
        assert!(err.contains("planar"));
        assert!(out.contains("H(Gr(1,4),3)") && out.contains("H(Gr(1,5),3)"));
    }

    #[test]
    fn table_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let (code, out, _) = call(&[
            "table",
            "--d",
            "2",
            "--compactification",
            "S",
            "--k",
            "1",
            "--n",
            "3..5",
            "--format",
            "csv",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 4);
    }

    #[test]
    fn csv_and_json_agree() {
        let args = [
            "table",
            "--d",
            "3",
            "--compactification",
            "S",
            "--k",
            "2",
            "--n",
            "4..6",
        ];
        let (_, csv_out, _) = call(&[&args[..], &["--format", "csv"]].concat());
        let (_, json_out, _) = call(&[&args[..], &["--format", "json"]].concat());
        let records: Vec<serde_json::Value> = serde_json::from_str(&json_out).unwrap();
        for (line, rec) in csv_out.lines().skip(1).zip(&records) {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells[5], rec["euler"].to_string());
            let q = rec["q_coefficients"].as_array().unwrap();
            for (j, c) in q.iter().enumerate() {
                assert_eq!(cells[6 + j], c.to_string());
            }
        }
        assert_eq!(records.len(), 3);
    }

    #[test]
    fn verify_small_grid() {
        let (code, out, _) = call(&["verify", "--grid", "k=1..1,n=4..4", "--suite", "pipeline"]);
        assert_eq!(code, 0);
        assert!(out.contains("pipeline     3 checks, 0 failed"), "{out}");
        assert!(out.trim_end().ends_with("0 failures"));
        let (code, _, _) = call(&["verify", "--grid", "k=1..4"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
