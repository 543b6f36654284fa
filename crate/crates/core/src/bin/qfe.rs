//! `qfe`: synthesize, verify and decompose solutions of
//! `f_{mn}(q) = f_m(q) f_n(q^m)` from the command line.
//!
//! Exit status: 0 on success, 1 on a domain failure, 2 on a usage or parse error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qfe::cyclotomic::cyclotomic;
use qfe::doc::{self, DocError, StructureDocument};
use qfe::expr::{format_expr, parse_rational_function, ExprError, MAX_DEGREE};
use qfe::structure::{decompose, DecomposeError};
use qfe::{Polynomial, RationalFunction};

#[derive(Parser)]
#[command(
    name = "qfe",
    version,
    about = "Rational-function solutions of f_mn(q) = f_m(q) f_n(q^m)"
)]
struct Cli {
    /// Print a JSON report on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the cyclotomic polynomial Phi_K.
    Cyclo {
        #[arg(value_parser = clap::value_parser!(u64).range(1..=MAX_DEGREE))]
        k: u64,
    },
    /// Print the quantum integer [N]_{q^R}.
    Qint {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..), default_value_t = 1)]
        r: u64,
    },
    /// Check the commutativity condition for a spec.
    Check {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Print f_N for a spec.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(value_parser = clap::value_parser!(u64).range(1..=MAX_DEGREE))]
        n: u64,
    },
    /// Check the functional equation at (M, N).
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Recover the structure data (lambda, t0, terms) of a spec.
    Decompose {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Evaluate the closed formula of a structure document at N.
    ClosedForm {
        #[arg(long)]
        structure: PathBuf,
        #[arg(value_parser = clap::value_parser!(u64).range(1..=MAX_DEGREE))]
        n: u64,
    },
    /// Print lambda, e, u, v with f = lambda q^e u/v.
    StandardForm { expr: String },
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(kind: &'static str, message: impl ToString) -> Self {
        Self {
            code: 2,
            kind,
            message: message.to_string(),
        }
    }

    fn domain(kind: &'static str, message: impl ToString) -> Self {
        Self {
            code: 1,
            kind,
            message: message.to_string(),
        }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        let kind = match e {
            DocError::Json(_) => "schema",
            DocError::Expr { .. } | DocError::BadRational { .. } => "parse",
            DocError::Spec(_) | DocError::Structure(_) => "invalid-document",
        };
        Failure::usage(kind, e)
    }
}

/// Text and JSON renderings of a successful result, plus its exit code.
struct Report {
    text: String,
    json: String,
    code: u8,
}

impl Report {
    fn ok(text: String, json: impl serde::Serialize) -> Self {
        Self {
            text,
            json: doc::to_json_string(&json),
            code: 0,
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<qfe::SolutionSpec, Failure> {
    Ok(doc::read_spec(&read_file(path)?)?)
}

fn polynomial_report(label: Value, p: &Polynomial) -> Report {
    let text = p.to_string();
    Report::ok(
        format!("{text}\n"),
        json!({ "input": label, "value": text, "degree": p.degree() }),
    )
}

fn function_report(label: Value, f: &RationalFunction) -> Report {
    let text = format_expr(f);
    Report::ok(
        format!("{text}\n"),
        json!({
            "input": label,
            "value": text,
            "polynomial": f.is_polynomial(),
            "numerator_degree": f.numer().degree(),
            "denominator_degree": f.denom().degree(),
        }),
    )
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Cyclo { k } => Ok(polynomial_report(json!({ "k": k }), &cyclotomic(k))),
        Command::Qint { n, r } => {
            if r.checked_mul(n - 1).is_none_or(|d| d > MAX_DEGREE) {
                return Err(Failure::usage("too-large", format!("degree exceeds {MAX_DEGREE}")));
            }
            Ok(polynomial_report(
                json!({ "n": n, "r": r }),
                &Polynomial::quantum_integer(n, r),
            ))
        }
        Command::Check { spec } => {
            let spec = load_spec(&spec)?;
            let report = spec.check_commutativity();
            let pairs: Vec<[u64; 2]> = report.violations.iter().map(|&(p, q)| [p, q]).collect();
            let mut text = String::new();
            if report.holds() {
                text.push_str("commutativity holds\n");
            } else {
                text.push_str("commutativity fails for");
                for [p, q] in &pairs {
                    let _ = write!(text, " ({p}, {q})");
                }
                text.push('\n');
            }
            Ok(Report {
                text,
                json: doc::to_json_string(
                    &json!({ "primes": spec.primes(), "commutes": report.holds(), "violations": pairs }),
                ),
                code: if report.holds() { 0 } else { 1 },
            })
        }
        Command::Synth { spec, n } => {
            let spec = load_spec(&spec)?;
            let f = spec.synthesize(n).map_err(|e| Failure::domain("not-commuting", e))?;
            Ok(function_report(json!({ "n": n }), &f))
        }
        Command::Verify { spec, m, n } => {
            if m.checked_mul(n).is_none_or(|mn| mn > MAX_DEGREE) {
                return Err(Failure::usage("too-large", format!("m*n exceeds {MAX_DEGREE}")));
            }
            let spec = load_spec(&spec)?;
            let holds = spec.verify_fe(m, n);
            Ok(Report {
                text: format!(
                    "f_{{{m}*{n}}} = f_{m}(q) f_{n}(q^{m}): {}\n",
                    if holds { "holds" } else { "fails" }
                ),
                json: doc::to_json_string(&json!({ "m": m, "n": n, "holds": holds, "commutes": spec.is_verified() })),
                code: if holds { 0 } else { 1 },
            })
        }
        Command::Decompose { spec } => {
            let spec = load_spec(&spec)?;
            let sd = decompose(&spec).map_err(|e| match e {
                DecomposeError::TooFewPrimes(_) => Failure::domain("too-few-primes", e),
                DecomposeError::NotASolution(_) => Failure::domain("not-a-solution", e),
            })?;
            let mut text = String::new();
            let _ = writeln!(text, "primes: {}", join(sd.primes().iter()));
            let _ = writeln!(
                text,
                "lambda: {}",
                join(sd.lambda().iter().map(|(p, l)| format!("{p}={l}")))
            );
            let _ = writeln!(text, "t0: {}", sd.t0());
            let _ = writeln!(
                text,
                "terms: {}",
                join(sd.terms().iter().map(|(r, t)| format!("{r}:{t}")))
            );
            let _ = writeln!(text, "t1: {}", sd.t1());
            Ok(Report::ok(text, StructureDocument::from_structure(&sd)))
        }
        Command::ClosedForm { structure, n } => {
            let sd = doc::read_structure(&read_file(&structure)?)?;
            Ok(function_report(json!({ "n": n }), &sd.closed_form(n)))
        }
        Command::StandardForm { expr } => {
            let f = parse_rational_function(&expr).map_err(|e| match e {
                ExprError::Parse(_) => Failure::usage("parse", e),
                ExprError::Eval(_) => Failure::domain("eval", e),
            })?;
            let sf = f.to_standard_form().map_err(|e| Failure::domain("zero-input", e))?;
            let text = format!("lambda: {}\ne: {}\nu: {}\nv: {}\n", sf.lambda, sf.e, sf.u, sf.v);
            let json = json!({
                "input": expr,
                "lambda": sf.lambda.to_string(),
                "e": sf.e,
                "u": sf.u.to_string(),
                "v": sf.v.to_string(),
            });
            Ok(Report::ok(text, json))
        }
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.json);
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(failure) => {
            eprintln!("qfe: {}", failure.message);
            if cli.json {
                let err = json!({ "error": { "kind": failure.kind, "message": failure.message } });
                print!("{}", doc::to_json_string(&err));
            }
            ExitCode::from(failure.code)
        }
    }
}
