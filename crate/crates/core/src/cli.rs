//! The `wittsig` command line: form files in, JSON (or CSV) out.
//!
//! Exit codes: 0 success, 1 numeric refinement failure, 2 usage, schema or
//! validation error, 3 singular form or pole.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::field_arith::{embeddings_g0, Embedding};
use crate::forms::{make_canonical, make_metabolic, parse_gram, CanonicalBlock, HermitianForm, Violation, WittElement};
use crate::funcfield::{parse_expression, RationalFunction};
use crate::rational::{format_rational, parse_rational, value_to_rational};
use crate::sigfunc::{evaluate_class_at_with, signature_step_function_with, CirclePoint};
use crate::witt_decide::is_trivial_with;
use crate::{Error, Result, Settings};

#[derive(Parser, Debug)]
#[command(name = "wittsig", version, about = "Signature invariants of hermitian forms over cyclotomic function fields")]
pub struct Cli {
    /// Precision doublings allowed before a numeric refinement gives up.
    #[arg(long, global = true, default_value_t = 10)]
    pub max_refine: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether the class in a form file vanishes.
    Decide { path: PathBuf },
    /// Print the signature step function at one embedding.
    Sigfn {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        embedding: u64,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
    },
    /// Evaluate the class at t = zeta_N^j.
    Eval {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        embedding: u64,
        #[arg(long, num_args = 2, value_names = ["N", "J"], allow_hyphen_values = true, required = true)]
        point: Vec<i64>,
    },
    /// Generate a form file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// List the embeddings G0 of Q(zeta_m).
    Embeddings {
        #[arg(long)]
        m: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Random metabolic form [[0, X], [eps X^*, Y]] of rank 2n.
    Metabolic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon: i8,
    },
    /// r0 <1> plus split blocks, each given as N:j=r.
    Canonical {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        r0: String,
        #[arg(long = "block", allow_hyphen_values = true)]
        blocks: Vec<String>,
    },
    /// Diagonal constant form with the given entries.
    Constant {
        #[arg(long)]
        m: u64,
        #[arg(long = "diag", required = true, allow_hyphen_values = true)]
        diag: Vec<String>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon: i8,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn fail(e: &Error) -> Self {
        Outcome {
            code: exit_code(e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Singular { .. } | Error::Pole { .. } | Error::SummandPole { .. } => 3,
        Error::RefinementBudget { .. } | Error::Consistency(_) | Error::Indeterminate => 1,
        _ => 2,
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let settings = Settings {
        max_refine: cli.max_refine,
        ..Settings::default()
    };
    match execute(&cli.command, &settings) {
        Ok(out) => Outcome::ok(out),
        Err(e) => Outcome::fail(&e),
    }
}

fn execute(cmd: &Command, settings: &Settings) -> Result<String> {
    match cmd {
        Command::Decide { path } => cmd_decide(path, settings),
        Command::Sigfn { path, embedding, out } => cmd_sigfn(path, *embedding, *out, settings),
        Command::Eval { path, embedding, point } => cmd_eval(path, *embedding, point[0], point[1], settings),
        Command::Gen { kind } => cmd_gen(kind),
        Command::Embeddings { m } => cmd_embeddings(*m),
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn cmd_decide(path: &Path, settings: &Settings) -> Result<String> {
    let w = read_form_file(path)?;
    Ok(pretty(&is_trivial_with(&w, settings)?))
}

pub fn cmd_sigfn(path: &Path, k: u64, out: OutFormat, settings: &Settings) -> Result<String> {
    let w = read_form_file(path)?;
    let rho = Embedding::new(w.conductor(), k)?;
    let s = signature_step_function_with(&w, &rho, settings, &[])?;
    Ok(match out {
        OutFormat::Json => pretty(&s),
        OutFormat::Csv => s.to_csv(),
    })
}

pub fn cmd_eval(path: &Path, k: u64, n: i64, j: i64, settings: &Settings) -> Result<String> {
    let w = read_form_file(path)?;
    let rho = Embedding::new(w.conductor(), k)?;
    if n <= 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let z = CirclePoint::exact(n as u64, j)?;
    Ok(format!("{}\n", evaluate_class_at_with(&w, &rho, &z, settings)?))
}

pub fn cmd_gen(kind: &GenKind) -> Result<String> {
    let w = match kind {
        GenKind::Metabolic { n, seed, m, epsilon } => WittElement::from_form(make_metabolic(*m, *n, *epsilon, *seed)?),
        GenKind::Canonical { r0, blocks } => {
            let r0 = parse_rational(r0).map_err(|e| Error::Parse(format!("--r0: {e}")))?;
            let blocks = blocks.iter().map(|b| parse_block(b)).collect::<Result<Vec<_>>>()?;
            make_canonical(&r0, &blocks)?
        }
        GenKind::Constant { m, diag, epsilon } => {
            let entries = diag
                .iter()
                .map(|d| {
                    let x = parse_expression(*m, d)?;
                    if x.as_constant().is_none() {
                        return Err(Error::InvalidArgument(format!("diagonal entry {d} depends on t")));
                    }
                    Ok(x)
                })
                .collect::<Result<Vec<_>>>()?;
            let f = HermitianForm::diagonal(*m, *epsilon, &entries)?;
            f.validate().map_err(|v| violation_error(0, v))?;
            WittElement::from_form(f)
        }
    };
    Ok(pretty(&form_file_json(&w)))
}

pub fn cmd_embeddings(m: u64) -> Result<String> {
    if m == 0 {
        return Err(Error::InvalidArgument("conductor must be positive".into()));
    }
    let ks: Vec<u64> = embeddings_g0(m).iter().map(Embedding::exponent).collect();
    Ok(pretty(&json!({ "m": m, "embeddings": ks })))
}

/// `N:j=r`, e.g. `4:1=1` or `12:5=-1/2`.
fn parse_block(s: &str) -> Result<CanonicalBlock> {
    let bad = || Error::Parse(format!("block {s:?} is not of the form N:j=r"));
    let (point, r) = s.split_once('=').ok_or_else(bad)?;
    let (n, j) = point.split_once(':').ok_or_else(bad)?;
    let n: u64 = n.trim().parse().map_err(|_| bad())?;
    let j: i64 = j.trim().parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    Ok(CanonicalBlock {
        n,
        j: j.rem_euclid(n as i64) as u64,
        r: parse_rational(r.trim()).map_err(|_| bad())?,
    })
}

fn violation_error(summand: usize, v: Violation) -> Error {
    match v {
        Violation::Singular => Error::Singular { summand: Some(summand) },
        Violation::NotHermitian { row, col } => Error::InvalidForm(format!(
            "summand {}: form is not epsilon-hermitian at entry ({row}, {col})",
            summand + 1
        )),
    }
}

/// The form-file document for `w`, with entries written as expressions.
pub fn form_file_json(w: &WittElement) -> Value {
    let summands: Vec<Value> = w
        .summands()
        .iter()
        .map(|s| {
            let gram: Vec<Vec<String>> = s
                .form
                .gram()
                .iter()
                .map(|row| row.iter().map(RationalFunction::to_string).collect())
                .collect();
            json!({ "coeff": format_rational(&s.coeff), "gram": gram })
        })
        .collect();
    json!({ "m": w.conductor(), "epsilon": w.epsilon(), "summands": summands })
}

pub fn read_form_file(path: &Path) -> Result<WittElement> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::Parse(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?
    };
    parse_form_file(&text)
}

/// Parses and validates a form file:
/// `{"m", "epsilon", "summands": [{"coeff", "gram"}]}`, or a single form
/// `{"m", "epsilon", "gram"}`.
pub fn parse_form_file(text: &str) -> Result<WittElement> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let m = v
        .get("m")
        .and_then(Value::as_u64)
        .filter(|&m| m > 0)
        .ok_or_else(|| Error::Parse("field \"m\" must be a positive integer".into()))?;
    let epsilon = match v.get("epsilon") {
        None => 1,
        Some(e) => match e.as_i64() {
            Some(1) => 1,
            Some(-1) => -1,
            _ => return Err(Error::Parse("field \"epsilon\" must be 1 or -1".into())),
        },
    };
    let raw: Vec<(Value, &Value)> = if let Some(g) = v.get("gram") {
        vec![(json!("1"), g)]
    } else {
        v.get("summands")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("field \"summands\" must be an array".into()))?
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let g = s
                    .get("gram")
                    .ok_or_else(|| Error::Parse(format!("summand {}: missing \"gram\"", i + 1)))?;
                Ok((s.get("coeff").cloned().unwrap_or(json!("1")), g))
            })
            .collect::<Result<_>>()?
    };
    let mut w = WittElement::zero(m, epsilon);
    for (i, (coeff, gram)) in raw.into_iter().enumerate() {
        let ctx = |e: Error| match e {
            Error::Parse(msg) => Error::Parse(format!("summand {}: {msg}", i + 1)),
            e => e,
        };
        let coeff: BigRational = value_to_rational(&coeff).map_err(ctx)?;
        let gram = parse_gram(m, gram).map_err(ctx)?;
        let form = HermitianForm::new(m, epsilon, gram).map_err(ctx)?;
        form.validate().map_err(|v| violation_error(i, v))?;
        w.push(form, coeff)?;
    }
    Ok(w)
}
