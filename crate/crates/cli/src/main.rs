//! `polyode` command-line front end.

mod commands;
mod output;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyode::aim::DEFAULT_CAP;
use polyode::algebra::{Polynomial, Rational};
use polyode::ode::EquationParams;
use polyode::quadrature::QuadConfig;
use polyode::verify::{Suite, VerifyOptions};
use polyode::Error;
use serde_json::{json, Map, Value};

use commands::{Format, Method, Outcome};
use output::{ErrorInfo, OutputDocument};

const EXIT_OK: u8 = 0;
const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "polyode",
    version,
    about = "Polynomial solutions of p2 y'' + p1 y' - tau y = 0"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree-n polynomial solution by recurrence, closed form and/or series oracle.
    Solve(SolveArgs),
    /// Case tag, discriminant, closed-form branch and weight formula.
    Classify(ClassifyArgs),
    /// Pearson weight, its constraints and inner products.
    Weight(WeightArgs),
    /// Randomized invariant suites.
    Verify(VerifyArgs),
    /// Asymptotic iteration termination check.
    Aim(AimArgs),
    /// Exactly solvable class built from a polynomial Q.
    Theorem2(Theorem2Args),
    /// Classical families: list, or cross-validate one entry.
    Catalog(CatalogArgs),
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a20: Rational,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a21: Rational,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a22: Rational,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a10: Rational,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a11: Rational,
}

impl ParamArgs {
    fn build(&self) -> polyode::Result<EquationParams> {
        EquationParams::new(
            self.a20.clone(),
            self.a21.clone(),
            self.a22.clone(),
            self.a10.clone(),
            self.a11.clone(),
        )
    }

    fn echo(&self, inputs: &mut Map<String, Value>) {
        for (k, v) in [
            ("a20", &self.a20),
            ("a21", &self.a21),
            ("a22", &self.a22),
            ("a10", &self.a10),
            ("a11", &self.a11),
        ] {
            inputs.insert(k.into(), output::rat(v));
        }
    }
}

#[derive(Args, Debug, Clone)]
struct QuadArgs {
    /// Gauss-Legendre nodes per panel.
    #[arg(long)]
    quad_points: Option<usize>,
    /// Bisection depth or refinement level cap.
    #[arg(long)]
    quad_max_depth: Option<usize>,
    /// Relative tolerance; defaults to POLYODE_QUAD_TOL when set.
    #[arg(long)]
    quad_tol: Option<f64>,
}

impl QuadArgs {
    fn config(&self) -> QuadConfig {
        let mut cfg = QuadConfig::from_env();
        if let Some(p) = self.quad_points {
            cfg.points = p;
        }
        if let Some(d) = self.quad_max_depth {
            cfg.max_depth = d;
        }
        if let Some(t) = self.quad_tol {
            cfg.tol = t;
        }
        cfg
    }

    fn echo(&self, inputs: &mut Map<String, Value>) {
        let cfg = self.config();
        inputs.insert(
            "quad".into(),
            json!({"points": cfg.points, "max_depth": cfg.max_depth, "tol": output::float(cfg.tol)}),
        );
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Recurrence,
    Closed,
    Oracle,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Json,
    Csv,
    Latex,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "recurrence")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Fail with exit code 3 instead of using the series oracle.
    #[arg(long)]
    no_fallback: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Degree used to select the closed-form branch.
    #[arg(long, default_value_t = 2)]
    n: usize,
}

#[derive(Args, Debug)]
struct WeightArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Case tag to sample (I..VI, General) or `auto` for all.
    #[arg(long, default_value = "auto")]
    case: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 4)]
    nmax: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict to these suites (repeatable).
    #[arg(long, value_parser = parse_suite)]
    suite: Vec<Suite>,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args, Debug)]
struct AimArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    /// Random non-eigenvalue samples per degree.
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct Theorem2Args {
    #[command(flatten)]
    params: ParamArgs,
    /// Coefficients of Q, constant first, comma separated.
    #[arg(long = "Q", allow_hyphen_values = true)]
    q: String,
    #[arg(long)]
    n: usize,
    /// Evaluation points, comma separated; sampled from the seed when absent.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// Entry name; lists all entries when absent.
    #[arg(long)]
    name: Option<String>,
    /// Parameters as `key=value` pairs, comma separated.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    args: String,
    #[arg(long, default_value_t = 4)]
    nmax: usize,
}

fn parse_suite(text: &str) -> Result<Suite, String> {
    Suite::ALL
        .into_iter()
        .find(|s| s.label().eq_ignore_ascii_case(text.trim()))
        .ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.label()).collect();
            format!(
                "unknown suite `{text}` (expected one of {})",
                names.join(", ")
            )
        })
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> polyode::Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| Error::Parse(format!("{s} in {what}")))
        })
        .collect()
}

fn parse_catalog_args(text: &str) -> polyode::Result<BTreeMap<String, Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("`{pair}` is not key=value")))?;
            Ok((k.trim().to_string(), v.parse::<Rational>()?))
        })
        .collect()
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::UnknownName(_)
        | Error::MissingArg { .. }
        | Error::InvalidParams(_) => EXIT_USAGE,
        Error::QuadratureNoConvergence { .. }
        | Error::ImaginaryResidue { .. }
        | Error::ProportionalityFailure { .. } => EXIT_VERIFICATION,
        _ => EXIT_DEGENERATE,
    }
}

fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("Error")
        .to_string()
}

type Job = Box<dyn FnOnce(&mut OutputDocument) -> polyode::Result<Outcome>>;

fn run(cli: Cli) -> (OutputDocument, u8, Option<String>) {
    let mut inputs = Map::new();
    let (name, result): (&str, Job) = match cli.command {
        Command::Solve(a) => {
            a.params.echo(&mut inputs);
            inputs.insert("n".into(), json!(a.n));
            inputs.insert(
                "method".into(),
                json!(format!("{:?}", a.method).to_lowercase()),
            );
            inputs.insert(
                "format".into(),
                json!(format!("{:?}", a.format).to_lowercase()),
            );
            inputs.insert("fallback".into(), json!(!a.no_fallback));
            let method = match a.method {
                MethodArg::Recurrence => Method::Recurrence,
                MethodArg::Closed => Method::Closed,
                MethodArg::Oracle => Method::Oracle,
                MethodArg::All => Method::All,
            };
            let format = match a.format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
                FormatArg::Latex => Format::Latex,
            };
            (
                "solve",
                Box::new(move |doc| {
                    commands::solve_cmd(
                        &a.params.build()?,
                        a.n,
                        method,
                        format,
                        !a.no_fallback,
                        doc,
                    )
                }),
            )
        }
        Command::Classify(a) => {
            a.params.echo(&mut inputs);
            inputs.insert("n".into(), json!(a.n));
            (
                "classify",
                Box::new(move |doc| commands::classify_cmd(&a.params.build()?, a.n, doc)),
            )
        }
        Command::Weight(a) => {
            a.params.echo(&mut inputs);
            a.quad.echo(&mut inputs);
            inputs.insert("nmax".into(), json!(a.nmax));
            (
                "weight",
                Box::new(move |doc| {
                    commands::weight_cmd(&a.params.build()?, a.nmax, &a.quad.config(), doc)
                }),
            )
        }
        Command::Verify(a) => {
            a.quad.echo(&mut inputs);
            inputs.insert("case".into(), json!(a.case));
            inputs.insert("trials".into(), json!(a.trials));
            inputs.insert("nmax".into(), json!(a.nmax));
            inputs.insert("seed".into(), json!(a.seed));
            inputs.insert(
                "suites".into(),
                json!(a.suite.iter().map(|s| s.label()).collect::<Vec<_>>()),
            );
            (
                "verify",
                Box::new(move |doc| {
                    let opts = VerifyOptions {
                        case: commands::case_filter(&a.case)?,
                        trials: a.trials,
                        n_max: a.nmax,
                        seed: a.seed,
                        quad: a.quad.config(),
                    };
                    commands::verify_cmd(&opts, &a.suite, doc)
                }),
            )
        }
        Command::Aim(a) => {
            a.params.echo(&mut inputs);
            inputs.insert("nmax".into(), json!(a.nmax));
            inputs.insert("samples".into(), json!(a.samples));
            inputs.insert("cap".into(), json!(a.cap));
            inputs.insert("seed".into(), json!(a.seed));
            (
                "aim",
                Box::new(move |doc| {
                    commands::aim_cmd(&a.params.build()?, a.nmax, a.samples, a.cap, a.seed, doc)
                }),
            )
        }
        Command::Theorem2(a) => {
            a.params.echo(&mut inputs);
            inputs.insert("Q".into(), json!(a.q));
            inputs.insert("n".into(), json!(a.n));
            inputs.insert("points".into(), json!(a.points));
            inputs.insert("seed".into(), json!(a.seed));
            (
                "theorem2",
                Box::new(move |doc| {
                    let q = Polynomial::new(parse_list::<Rational>(&a.q, "--Q")?);
                    let points = a
                        .points
                        .as_deref()
                        .map(|s| parse_list::<f64>(s, "--points"))
                        .transpose()?;
                    commands::theorem2_cmd(&a.params.build()?, &q, a.n, points, a.seed, doc)
                }),
            )
        }
        Command::Catalog(a) => {
            inputs.insert("name".into(), json!(a.name));
            inputs.insert("args".into(), json!(a.args));
            inputs.insert("nmax".into(), json!(a.nmax));
            (
                "catalog",
                Box::new(move |doc| {
                    let args = parse_catalog_args(&a.args)?;
                    commands::catalog_cmd(a.name.as_deref(), &args, a.nmax, doc)
                }),
            )
        }
    };
    let mut doc = OutputDocument::new(name, Value::Object(inputs));
    match result(&mut doc) {
        Ok(Outcome { passed, text }) => {
            (doc, if passed { EXIT_OK } else { EXIT_VERIFICATION }, text)
        }
        Err(e) => {
            let code = exit_code(&e);
            doc.error = Some(ErrorInfo {
                kind: error_kind(&e),
                message: e.to_string(),
                exit_code: code,
            });
            (doc, code, None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, code, text) = run(cli);
    if let Some(e) = &doc.error {
        eprintln!("error: {}", e.message);
    }
    let body = match text {
        Some(t) if doc.error.is_none() => t,
        _ => doc.render(),
    };
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(body.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(EXIT_VERIFICATION);
    }
    ExitCode::from(code)
}
