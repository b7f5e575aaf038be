//! Output document assembly and value formatting.

use polyode::algebra::{Polynomial, Rational, RationalFunction};
use polyode::ode::EquationParams;
use serde_json::{json, Map, Number, Value};

pub const SCHEMA_VERSION: &str = "1";

/// Machine-readable result of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputDocument {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Vec<String>,
    pub error: Option<ErrorInfo>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    pub exit_code: u8,
}

impl OutputDocument {
    pub fn new(command: &str, inputs: Value) -> Self {
        OutputDocument {
            command: command.into(),
            inputs,
            results: Value::Null,
            diagnostics: Vec::new(),
            error: None,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("command".into(), json!(self.command));
        doc.insert("inputs".into(), self.inputs.clone());
        doc.insert("results".into(), self.results.clone());
        doc.insert("diagnostics".into(), json!(self.diagnostics));
        if let Some(e) = &self.error {
            doc.insert(
                "error".into(),
                json!({"kind": e.kind, "message": e.message, "exit_code": e.exit_code}),
            );
        }
        Value::Object(doc)
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_value()).expect("documents serialize");
        text.push('\n');
        text
    }
}

pub fn rat(r: &Rational) -> Value {
    Value::String(r.to_fraction_string())
}

/// Coefficients as `num/den` strings, constant term first.
pub fn poly(p: &Polynomial) -> Value {
    Value::Array(p.coeffs().iter().map(rat).collect())
}

pub fn ratfun(f: &RationalFunction) -> Value {
    json!({"numerator": poly(f.num()), "denominator": poly(f.den())})
}

/// Float with 17 significant digits; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(serde_json::from_str::<Number>(&text).expect("scientific notation parses"))
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn params(p: &EquationParams) -> Value {
    json!({
        "a20": rat(&p.a20),
        "a21": rat(&p.a21),
        "a22": rat(&p.a22),
        "a10": rat(&p.a10),
        "a11": rat(&p.a11),
    })
}

/// One CSV row per coefficient: `method,n,power,coefficient`.
pub fn csv_rows(n: usize, rows: &[(String, Polynomial)]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["method", "n", "power", "coefficient"])
        .expect("in-memory write");
    for (method, p) in rows {
        for (k, c) in p.coeffs().iter().enumerate() {
            writer
                .write_record([
                    method.as_str(),
                    &n.to_string(),
                    &k.to_string(),
                    &c.to_fraction_string(),
                ])
                .expect("in-memory write");
        }
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ASCII output")
}

/// One `y_n(x) = ...` line per method, descending powers.
pub fn latex_rows(n: usize, rows: &[(String, Polynomial)]) -> String {
    rows.iter()
        .map(|(method, p)| format!("% {method}\ny_{{{n}}}(x) = {}\n", p.to_latex()))
        .collect()
}
