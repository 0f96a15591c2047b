//! Command-line front end for `qtwist-core`.
//!
//! Expressions are parsed by [`expr`], printed back in canonical form by
//! [`print`] and checked by the verification suites in [`suites`]. The
//! [`run`] entry point never panics on bad input: every failure becomes
//! an exit code and a report.
//!
//! | exit | meaning |
//! |------|---------|
//! | 0 | success, or every check vanished |
//! | 1 | a verification residual was found |
//! | 2 | input error |
//! | 3 | rewrite fuel exhausted; the partial element is reported |

pub mod expr;
pub mod print;
pub mod suites;

use clap::{Parser, Subcommand, ValueEnum};
use qtwist_core::braidact::{self, Convention, Variant};
use qtwist_core::pbwengine::{pbw_monomials, Strategy, DEFAULT_FUEL};
use qtwist_core::poisson::{PoissonAlgebra, PoissonPoly};
use qtwist_core::{Element, Engine, Error, Gen};
use serde::Serialize;

use crate::expr::{evaluate, ExprError, Value};
use crate::print::{fmt_element, fmt_gauss, fmt_laurent, fmt_poisson, fmt_ratfunc, fmt_word};
use crate::suites::{Context, SuiteResult, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FUEL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qtwist",
    version,
    about = "Exact computations in the twisted quantized enveloping algebra of type CI"
)]
pub struct Command {
    /// Rank n of the algebra (matrices are 2n x 2n).
    #[arg(long = "n", global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=8))]
    pub n: u64,
    /// Maximum number of rewrite steps per normalization.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Relation lists, closed forms and braid tables: literal or corrected.
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::AsPrinted)]
    pub variant: VariantArg,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    AsPrinted,
    Corrected,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AsPrinted => Variant::AsPrinted,
            VariantArg::Corrected => Variant::Corrected,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Normal form of an expression in the PBW basis.
    Normalize { expr: String },
    /// Normal form of the commutator `xy − yx`.
    Commutator { x: String, y: String },
    /// Reduced form of a Poisson polynomial, or the bracket `{x, y}`.
    Poisson { x: String, y: Option<String> },
    /// Image of an expression under a word in the braid generators.
    Braid {
        /// Node indices separated by spaces or commas, rightmost applied
        /// first; `-k` is the inverse of `β_k`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        expr: String,
    },
    /// Ordered PBW monomials of a given degree.
    Basis {
        #[arg(long)]
        degree: usize,
    },
    /// Run a verification suite, or all of them in dependency order.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Exit code and standard output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// JSON report.
#[derive(Serialize, Debug)]
pub struct Report {
    pub status: &'static str,
    pub rank: usize,
    pub result: Vec<Term>,
    pub residuals: Vec<ResidualEntry>,
}

#[derive(Serialize, Debug)]
pub struct Term {
    pub coeff: Coeff,
    pub word: Vec<[u8; 2]>,
}

#[derive(Serialize, Debug)]
pub struct Coeff {
    pub num: String,
    pub den: String,
}

#[derive(Serialize, Debug)]
pub struct ResidualEntry {
    pub label: String,
    pub residual: String,
}

/// What a verb computed, before formatting.
enum Payload {
    Quantum(Element),
    Poisson(PoissonPoly),
    Monomials(Vec<Vec<Gen>>),
    Suites(Vec<SuiteResult>),
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Command::try_parse_from(args) {
        Ok(cmd) => execute(&cmd),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            Outcome { code, stdout: e.render().to_string() }
        }
    }
}

/// Runs a parsed command.
pub fn execute(cmd: &Command) -> Outcome {
    let n = cmd.n as usize;
    match compute(cmd) {
        Ok(payload) => {
            let code = match &payload {
                Payload::Suites(rs) if rs.iter().any(|r| !r.is_clean()) => EXIT_RESIDUAL,
                _ => EXIT_OK,
            };
            render(cmd.format, n, code, &payload)
        }
        Err(Failure::Input(msg)) => render_error(cmd.format, n, EXIT_INPUT, msg),
        Err(Failure::Core(Error::FuelExhausted(partial))) => {
            render(cmd.format, n, EXIT_FUEL, &Payload::Quantum(*partial))
        }
        Err(Failure::Core(e)) => render_error(cmd.format, n, EXIT_INPUT, e.to_string()),
    }
}

enum Failure {
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn compute(cmd: &Command) -> Result<Payload, Failure> {
    let n = cmd.n as usize;
    let variant = Variant::from(cmd.variant);
    let normalize = |e: &Engine, x: &Element| e.normalize_with(x, cmd.fuel, Strategy::Leftmost);
    Ok(match &cmd.verb {
        Verb::Normalize { expr } => match evaluate(expr, n)? {
            Value::Poisson(p) => Payload::Poisson(PoissonAlgebra::new(n)?.reduce(&p)?),
            v => Payload::Quantum(normalize(&Engine::new(n)?, &v.into_element()?)?),
        },
        Verb::Commutator { x, y } => {
            let (x, y) = (evaluate(x, n)?.into_element()?, evaluate(y, n)?.into_element()?);
            Payload::Quantum(normalize(&Engine::new(n)?, &(&(&x * &y) - &(&y * &x)))?)
        }
        Verb::Poisson { x, y } => {
            let alg = PoissonAlgebra::new(n)?;
            let x = evaluate(x, n)?.into_poisson()?;
            Payload::Poisson(match y {
                Some(y) => alg.bracket(&alg.reduce(&x)?, &alg.reduce(&evaluate(y, n)?.into_poisson()?)?)?,
                None => alg.reduce(&x)?,
            })
        }
        Verb::Braid { word, expr } => {
            let word = parse_word(word, n).map_err(Failure::Input)?;
            match evaluate(expr, n)? {
                Value::Poisson(p) => {
                    Payload::Poisson(suites::poisson_braid_word(&PoissonAlgebra::new(n)?, &word, variant, &p)?)
                }
                v => {
                    let engine = Engine::new(n)?;
                    let x = normalize(&engine, &v.into_element()?)?;
                    let conv = match variant {
                        Variant::AsPrinted => Convention::AsPrinted,
                        Variant::Corrected => Convention::SignAdjusted,
                    };
                    Payload::Quantum(braidact::apply_word_with(&engine, &word, conv, &x)?)
                }
            }
        }
        Verb::Basis { degree } => {
            Payload::Monomials(pbw_monomials(n, *degree).into_iter().map(|w| w.letters().to_vec()).collect())
        }
        Verb::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(Failure::Input(format!(
                    "unknown suite '{suite}'; expected one of {} or all",
                    SUITES.join(", ")
                )));
            };
            let mut ctx = Context::new(n, cmd.fuel, variant);
            let mut out = Vec::new();
            for name in names {
                out.push(suites::run_suite(&mut ctx, name)?);
            }
            Payload::Suites(out)
        }
    })
}

/// Parses a braid word such as `"1 -2 1"` or `"1,-2,1"`.
pub fn parse_word(text: &str, n: usize) -> Result<Vec<i64>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let k: i64 = t.parse().map_err(|_| format!("bad braid letter '{t}'"))?;
            if k == 0 || k.unsigned_abs() as usize > n {
                Err(format!("braid letter {k} outside ±1..±{n}"))
            } else {
                Ok(k)
            }
        })
        .collect()
}

fn status(code: i32) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_RESIDUAL => "residual",
        EXIT_FUEL => "fuel-exhausted",
        _ => "input-error",
    }
}

fn render_error(format: Format, n: usize, code: i32, msg: String) -> Outcome {
    let stdout = match format {
        Format::Text => format!("error: {msg}\n"),
        Format::Json => json(&Report {
            status: status(code),
            rank: n,
            result: Vec::new(),
            residuals: vec![ResidualEntry { label: "error".into(), residual: msg }],
        }),
    };
    Outcome { code, stdout }
}

fn json(r: &Report) -> String {
    let mut s = serde_json::to_string(r).expect("report serializes");
    s.push('\n');
    s
}

fn render(format: Format, n: usize, code: i32, payload: &Payload) -> Outcome {
    let stdout = match format {
        Format::Text => text(code, payload),
        Format::Json => json(&report(n, code, payload)),
    };
    Outcome { code, stdout }
}

fn word_pairs(letters: &[Gen]) -> Vec<[u8; 2]> {
    letters.iter().map(|g| [g.row, g.col]).collect()
}

fn report(n: usize, code: i32, payload: &Payload) -> Report {
    let mut result = Vec::new();
    let mut residuals = Vec::new();
    match payload {
        Payload::Quantum(x) => {
            for (w, c) in x.terms() {
                result.push(Term {
                    coeff: Coeff { num: fmt_laurent(c.num()), den: fmt_laurent(c.den()) },
                    word: word_pairs(w.letters()),
                });
            }
        }
        Payload::Poisson(p) => {
            for (m, c) in p.terms() {
                result.push(Term { coeff: Coeff { num: fmt_gauss(c), den: "1".into() }, word: word_pairs(m.vars()) });
            }
        }
        Payload::Monomials(ws) => {
            for w in ws {
                result.push(Term { coeff: Coeff { num: "1".into(), den: "1".into() }, word: word_pairs(w) });
            }
        }
        Payload::Suites(rs) => {
            for r in rs {
                for (label, res) in &r.residuals {
                    residuals.push(ResidualEntry { label: format!("{}: {label}", r.name), residual: res.clone() });
                }
            }
        }
    }
    Report { status: status(code), rank: n, result, residuals }
}

fn text(code: i32, payload: &Payload) -> String {
    match payload {
        Payload::Quantum(x) if code == EXIT_FUEL => format!("fuel exhausted; partial result:\n{}\n", fmt_element(x)),
        Payload::Quantum(x) => format!("{}\n", fmt_element(x)),
        Payload::Poisson(p) => format!("{}\n", fmt_poisson(p)),
        Payload::Monomials(ws) => ws.iter().map(|w| format!("{}\n", fmt_word(w))).collect(),
        Payload::Suites(rs) => {
            let mut s = String::new();
            for r in rs {
                let verdict = if r.is_clean() { "PASS" } else { "FAIL" };
                s.push_str(&format!("{}: {verdict} ({} checked, {} residual)\n", r.name, r.checked, r.residuals.len()));
                for (label, res) in &r.residuals {
                    s.push_str(&format!("  {label}: {res}\n"));
                }
            }
            s
        }
    }
}

/// Any evaluated value in canonical text.
pub fn fmt_value(v: &Value) -> String {
    match v {
        Value::Scalar(c) => fmt_ratfunc(c),
        Value::Quantum(x) => fmt_element(x),
        Value::Poisson(p) => fmt_poisson(p),
    }
}
