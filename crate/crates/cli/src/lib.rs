//! The `holomellin` command line. [`run`] is the whole program; `main` only
//! wires it to the process streams.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use holomellin::error::Error;
use holomellin::forward::ode_to_mellin_rec;
use holomellin::inverse::rec_to_ode_traced;
use holomellin::operators::{DiffOp, Operator, RecOp};
use holomellin::oracle::{expand, verify_recurrence, OracleConfig, SeriesMode, MAX_TERMS_ENV};
use holomellin::poly::Polynomial;
use holomellin::scalar::{self, Scalar};
use holomellin::solvers::{hyper_solutions_with, rational_ode_solutions_with, SolverConfig};
use holomellin::syntax::{from_json_str, parse_operator_detailed, to_json, ParsedOperator};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "holomellin", version, about = "Mellin transforms of holonomic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recurrence for the Mellin transform of a solution of an ODE.
    Mellin {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// ODE whose solutions have Mellin transforms satisfying a recurrence.
    Invmellin {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Show every reduction pass.
        #[arg(long)]
        trace: bool,
    },
    /// Taylor coefficients at zero of a solution of an ODE.
    Series {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Leading Taylor coefficients, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        init: Vec<String>,
        /// Highest power of x to print.
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Hypergeometric solutions of a recurrence.
    SolveRec {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Rational solutions of an ODE.
    SolveOde {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Checks a recurrence numerically on the Mellin moments of an ODE solution.
    Verify {
        /// The ODE, as an expression or a file (JSON or expression).
        #[arg(long, allow_hyphen_values = true)]
        ode: String,
        /// The recurrence, as an expression or a file. Defaults to the
        /// forward conversion of the ODE.
        #[arg(long, allow_hyphen_values = true)]
        rec: Option<String>,
        /// Leading Taylor coefficients of the solution, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        init: Vec<String>,
        /// Check the recurrence for n = 0..=n_max.
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        /// Largest residual accepted.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Largest series truncation order (overrides HOLOMELLIN_MAX_TERMS).
        #[arg(long)]
        terms: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// Operator expression, e.g. "(x-1)*Dx + 1" or "(n+2)*S^2 - S - (n+1)".
    #[arg(long, conflicts_with = "file", required_unless_present = "file", allow_hyphen_values = true)]
    expr: Option<String>,
    /// File holding an operator in JSON form (or as an expression).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Output {
    /// Print JSON (the default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Print a human-readable rendering instead of JSON.
    #[arg(long)]
    pretty: bool,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
    /// Printed on stdout before failing, e.g. a verification report.
    report: Option<String>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
            report: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Json(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: e.to_string(),
            report: None,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            EXIT_OK
        }
        Err(f) => {
            if let Some(report) = f.report {
                let _ = writeln!(out, "{report}");
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> CliResult<String> {
    match command {
        Command::Mellin { input, output } => {
            // converted as written: a polynomial factor changes the recurrence
            let (parsed, ode) = read_diffop_raw(&input)?;
            let rec = ode_to_mellin_rec(&ode)?;
            let mut v = json!({"input": to_json(&parsed.op), "result": to_json(&Operator::Rec(rec.clone()))});
            add_multiplier(&mut v, &parsed);
            Ok(render(&output, v, || format!("{rec} = 0")))
        }
        Command::Invmellin { input, output, trace } => {
            let (parsed, rec) = read_recop(&input)?;
            let t = rec_to_ode_traced(&rec)?;
            let mut v = json!({
                "input": to_json(&parsed.op),
                "result": to_json(&Operator::Diff(t.ode.clone())),
                "differentiated": t.differentiated,
            });
            add_multiplier(&mut v, &parsed);
            if trace {
                v["trace"] = json!(t.lines());
            }
            Ok(render(&output, v, || {
                let mut lines = if trace { t.lines() } else { Vec::new() };
                lines.push(t.ode.to_string());
                lines.join("\n")
            }))
        }
        Command::Series {
            input,
            output,
            init,
            terms,
        } => {
            let (parsed, ode) = read_diffop_raw(&input)?;
            let init = parse_scalars(&init)?;
            let limit = OracleConfig::from_env()?.max_terms;
            if terms > limit {
                return Err(Failure::from(Error::UnsupportedInput(format!(
                    "{terms} terms requested, limit is {limit} (set {MAX_TERMS_ENV} to raise it)"
                ))));
            }
            let s = expand(&ode, &init, terms, SeriesMode::Exact)?;
            let coeffs: Vec<String> = s.exact().unwrap_or(&[]).iter().map(scalar::format).collect();
            let mut v = json!({"input": to_json(&parsed.op), "coeffs": coeffs});
            add_multiplier(&mut v, &parsed);
            Ok(render(&output, v, || coeffs.join(", ")))
        }
        Command::SolveRec { input, output } => {
            let (parsed, rec) = read_recop(&input)?;
            let report = hyper_solutions_with(&rec, &SolverConfig::default())?;
            let sols: Vec<Value> = report
                .solutions
                .iter()
                .map(|c| {
                    json!({
                        "ratio": c.ratio.to_string(),
                        "num": c.ratio.num().to_string(),
                        "den": c.ratio.den().to_string(),
                    })
                })
                .collect();
            let mut v = json!({"input": to_json(&parsed.op), "solutions": sols, "bounds_hit": report.bounds_hit});
            add_multiplier(&mut v, &parsed);
            Ok(render(&output, v, || {
                let mut lines: Vec<String> = report
                    .solutions
                    .iter()
                    .map(|c| format!("y(n+1)/y(n) = {}", c.ratio))
                    .collect();
                if lines.is_empty() {
                    lines.push("no hypergeometric solutions".into());
                }
                lines.extend(report.bounds_hit.iter().map(|b| format!("note: {b}")));
                lines.join("\n")
            }))
        }
        Command::SolveOde { input, output } => {
            let (parsed, ode) = read_diffop(&input)?;
            let report = rational_ode_solutions_with(&ode, &SolverConfig::default())?;
            let sols: Vec<Value> = report
                .solutions
                .iter()
                .map(|s| {
                    json!({
                        "value": s.value.to_string(),
                        "num": s.value.num().to_string(),
                        "den": s.value.den().to_string(),
                    })
                })
                .collect();
            let mut v = json!({"input": to_json(&parsed.op), "solutions": sols, "bounds_hit": report.bounds_hit});
            add_multiplier(&mut v, &parsed);
            Ok(render(&output, v, || {
                let mut lines: Vec<String> =
                    report.solutions.iter().map(|s| format!("f(x) = {}", s.value)).collect();
                if lines.is_empty() {
                    lines.push("no rational solutions".into());
                }
                lines.extend(report.bounds_hit.iter().map(|b| format!("note: {b}")));
                lines.join("\n")
            }))
        }
        Command::Verify {
            ode,
            rec,
            init,
            n_max,
            tol,
            terms,
            output,
        } => verify(&ode, rec.as_deref(), &init, n_max, tol, terms, &output),
    }
}

fn verify(
    ode: &str,
    rec: Option<&str>,
    init: &[String],
    n_max: usize,
    tol: f64,
    terms: Option<usize>,
    output: &Output,
) -> CliResult<String> {
    if !(tol > 0.0) {
        return Err(Failure::usage("--tol must be positive"));
    }
    let ode = match load(ode)?.op {
        Operator::Diff(d) => d,
        Operator::Rec(_) => return Err(Failure::usage("--ode expects a differential operator")),
    };
    let rec = match rec {
        Some(text) => match load(text)?.op {
            Operator::Rec(r) => r,
            Operator::Diff(_) => return Err(Failure::usage("--rec expects a recurrence")),
        },
        None => ode_to_mellin_rec(&ode)?,
    };
    let init = parse_scalars(init)?;
    let mut config = OracleConfig::from_env()?;
    if let Some(k) = terms {
        config.max_terms = k;
    }
    // moments are combined with polynomial weights, so ask for more digits
    config.tol = (tol * 1e-3).max(1e-12);
    let report = verify_recurrence(&ode, &init, &rec, n_max, &config)?;
    let passed = report.max_residual <= tol;
    let boundary: serde_json::Map<String, Value> =
        report.boundary.iter().map(|(s, v)| (s.to_string(), json!(v))).collect();
    let v = json!({
        "ode": to_json(&Operator::Diff(ode)),
        "rec": to_json(&Operator::Rec(rec.clone())),
        "n_max": n_max,
        "tol": tol,
        "moments": report.moments,
        "boundary": boundary,
        "residuals": report.residuals,
        "max_residual": report.max_residual,
        "passed": passed,
    });
    let text = render(output, v, || {
        let mut lines = vec![format!("recurrence: {rec} = 0")];
        for (s, val) in &report.boundary {
            lines.push(format!("{s} = {val:.12}"));
        }
        lines.push(format!(
            "max residual over n = 0..{n_max}: {:.3e} ({})",
            report.max_residual,
            if passed { "ok" } else { "FAILED" }
        ));
        lines.join("\n")
    });
    if passed {
        Ok(text)
    } else {
        Err(Failure {
            code: EXIT_DOMAIN,
            message: format!("max residual {:.3e} exceeds tolerance {tol:e}", report.max_residual),
            report: Some(text),
        })
    }
}

fn render(output: &Output, v: Value, pretty: impl FnOnce() -> String) -> String {
    if output.pretty {
        pretty()
    } else {
        serde_json::to_string_pretty(&v).expect("json values serialize")
    }
}

fn add_multiplier(v: &mut Value, parsed: &ParsedOperator) {
    if parsed.multiplier != Polynomial::one(parsed.multiplier.var()) {
        v["multiplier"] = json!(parsed.multiplier.to_string());
    }
}

fn parse_scalars(items: &[String]) -> CliResult<Vec<Scalar>> {
    items
        .iter()
        .map(|s| {
            scalar::parse(s).ok_or_else(|| Failure::usage(format!("`{s}` is not a rational number (use p or p/q)")))
        })
        .collect()
}

/// Reads an operator from `--expr` or `--file`.
fn read(input: &Input) -> CliResult<ParsedOperator> {
    match (&input.expr, &input.file) {
        (Some(e), _) => Ok(parse_operator_detailed(e)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            parse_text(&text)
        }
        (None, None) => Err(Failure::usage("give --expr or --file")),
    }
}

/// An argument that names a file if one exists, else an expression.
fn load(arg: &str) -> CliResult<ParsedOperator> {
    let path = std::path::Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {arg}: {e}")))?;
        parse_text(&text)
    } else {
        parse_text(arg)
    }
}

fn parse_text(text: &str) -> CliResult<ParsedOperator> {
    if text.trim_start().starts_with('{') {
        let op = from_json_str(text)?;
        let var = match &op {
            Operator::Diff(_) => holomellin::poly::Var::X,
            Operator::Rec(_) => holomellin::poly::Var::N,
        };
        Ok(ParsedOperator {
            op,
            multiplier: Polynomial::one(var),
        })
    } else {
        Ok(parse_operator_detailed(text)?)
    }
}

/// A differential operator as written, for the series expansion.
fn read_diffop_raw(input: &Input) -> CliResult<(ParsedOperator, DiffOp)> {
    let parsed = read(input)?;
    match &parsed.op {
        Operator::Diff(d) => {
            let d = d.clone();
            Ok((parsed, d))
        }
        Operator::Rec(_) => Err(Failure::usage("expected a differential operator, found a recurrence")),
    }
}

fn read_diffop(input: &Input) -> CliResult<(ParsedOperator, DiffOp)> {
    let (parsed, d) = read_diffop_raw(input)?;
    Ok((parsed, holomellin::operators::normalize_diffop(&d)?))
}

fn read_recop(input: &Input) -> CliResult<(ParsedOperator, RecOp)> {
    let parsed = read(input)?;
    match &parsed.op {
        Operator::Rec(r) => {
            let r = holomellin::operators::normalize_recop(r)?;
            Ok((parsed, r))
        }
        Operator::Diff(_) => Err(Failure::usage("expected a recurrence, found a differential operator")),
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
