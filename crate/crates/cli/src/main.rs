//! `lambertq`: evaluate, tabulate, verify and benchmark from the shell.
//!
//! Exit codes: 0 success, 1 verification failure, 2 domain error,
//! 3 convergence failure.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lambertq::harness::{self, Suite, TableId};
use lambertq::request::{FunctionId, FunctionRequest, DEFAULT_DIGITS};
use lambertq::{Error, ErrorClass, Method, TruncationPolicy};

#[derive(Parser)]
#[command(name = "lambertq", version, about = "Lambert series, q-gamma and theta functions near q = 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function and print a JSON record.
    Eval(EvalArgs),
    /// Reproduce one of the comparison tables.
    Table(TableArgs),
    /// Run an invariant suite at 256 bits.
    Verify(VerifyArgs),
    /// Compare direct and asymptotic cost over a list of q.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ParamArgs {
    /// Function id, e.g. lambert, qgamma, theta_logderiv.
    #[arg(long = "fn", value_parser = parse_from_str::<FunctionId>)]
    function: FunctionId,
    /// Lambert order; a bare integer selects the integer cases.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Polygamma order or divisor power.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Theta argument; `re,im` for complex values.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Theta index 1..4.
    #[arg(long)]
    j: Option<u8>,
    /// Eisenstein weight index.
    #[arg(long)]
    k: Option<u32>,
    /// direct, asym, auto or closed.
    #[arg(long, default_value = "auto", value_parser = parse_from_str::<Method>)]
    method: Method,
    /// `optimal` or a fixed number of kept terms.
    #[arg(long, default_value = "optimal", value_parser = parse_from_str::<TruncationPolicy>)]
    truncation: TruncationPolicy,
}

impl ParamArgs {
    fn request(&self, digits: usize) -> FunctionRequest {
        FunctionRequest {
            function: self.function,
            s: self.s.clone(),
            m: self.m,
            x: self.x.clone(),
            z: self.z.clone(),
            j: self.j,
            k: self.k,
            q: None,
            q_expr: None,
            method: self.method,
            digits,
            truncation: self.truncation,
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Base as a decimal literal.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Base as an expression, e.g. `exp(-1/pi)`.
    #[arg(long = "q-expr", allow_hyphen_values = true)]
    q_expr: Option<String>,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    digits: usize,
    /// Only `json` is meaningful for single records.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(value_parser = parse_from_str::<TableId>)]
    table: TableId,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = parse_from_str::<Suite>, default_value = "all")]
    suite: Suite,
    /// Print the per-check reports as JSON instead of a summary.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Comma-separated list of bases.
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    digits: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_from_str<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| e.to_string())
}

/// Failures that end the process with a documented exit code.
enum Failure {
    Eval(Error),
    Verify(String),
    Io(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_rows<T: serde::Serialize>(rows: &[T], format: Format, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            for r in rows {
                c.serialize(r)?;
            }
            c.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> Result<(), Failure> {
    let mut req = a.params.request(a.digits);
    req.q = a.q;
    req.q_expr = a.q_expr;
    if let Format::Csv = a.format {
        return Err(Failure::Eval(Error::Unsupported("eval writes JSON records only".into())));
    }
    let record = req.run().map_err(Failure::Eval)?;
    let mut w = sink(&a.out)?;
    serde_json::to_writer(&mut w, &record)?;
    writeln!(w)?;
    Ok(())
}

fn cmd_table(a: TableArgs) -> Result<(), Failure> {
    let table = harness::build_table(a.table);
    match a.format {
        Format::Csv => write_rows(&table.rows, Format::Csv, &a.out)?,
        Format::Json => {
            let mut w = sink(&a.out)?;
            serde_json::to_writer_pretty(&mut w, &table)?;
            writeln!(w)?;
        }
    }
    if table.any_errors() {
        let bad: Vec<_> = table.rows.iter().filter(|r| !r.error.is_empty()).map(|r| r.label.as_str()).collect();
        return Err(Failure::Verify(format!("{} row(s) could not be evaluated: {}", bad.len(), bad.join(", "))));
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let reports = harness::verify(a.suite);
    let mut w = sink(&a.out)?;
    match a.format {
        Some(Format::Json) => {
            serde_json::to_writer_pretty(&mut w, &reports)?;
            writeln!(w)?;
        }
        Some(Format::Csv) => {
            drop(w);
            let flat: Vec<_> = reports
                .iter()
                .map(|r| (&r.suite, &r.name, r.cases, format!("{:.3e}", r.worst_ratio), r.failures.len()))
                .collect();
            let mut c = csv::Writer::from_writer(sink(&a.out)?);
            c.write_record(["suite", "name", "cases", "worst_ratio", "failures"])?;
            for row in flat {
                c.serialize(row)?;
            }
            c.flush()?;
        }
        None => {
            for r in &reports {
                let status = if r.passed() { "ok" } else { "FAIL" };
                writeln!(
                    w,
                    "{status:4} {}/{}: {} cases, worst residual/tolerance {:.3e}",
                    r.suite, r.name, r.cases, r.worst_ratio
                )?;
            }
        }
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    let mut msg = String::new();
    for r in failed {
        msg.push_str(&format!("invariant {}/{} failed:\n", r.suite, r.name));
        for f in r.failures.iter().take(5) {
            msg.push_str(&format!("  {f}\n"));
        }
    }
    Err(Failure::Verify(msg.trim_end().into()))
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let req = a.params.request(a.digits);
    let rows = harness::bench(&req, &a.q, a.digits).map_err(Failure::Eval)?;
    write_rows(&rows, a.format, &a.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Eval(e)) => {
            eprintln!("error: {e}");
            match e.class() {
                ErrorClass::Domain => ExitCode::from(2),
                ErrorClass::Convergence => ExitCode::from(3),
            }
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
