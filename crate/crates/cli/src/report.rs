//! Report assembly and serialization. Numbers carry 17 significant digits,
//! non-finite values become null, and nothing time-dependent is written, so
//! output is byte-stable for a fixed configuration.

use std::str::FromStr;

use serde_json::{Map, Number, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    pub quantity: String,
    /// Ordered (name, literal) pairs describing the inputs.
    pub inputs: Vec<(String, String)>,
    pub value_re: f64,
    pub value_im: f64,
    /// Certified truncation bound; `None` for values without one.
    pub err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub id: String,
    pub paper_ref: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Records {
    Eval(Vec<EvalRecord>),
    Check(Vec<CheckRecord>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: Vec<(String, Value)>,
    pub records: Records,
}

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // {:.16e} keeps 17 significant digits, enough to round-trip binary64
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float is a JSON number"))
}

fn num_text(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

impl EvalRecord {
    fn to_json(&self) -> Value {
        let inputs: Map<String, Value> = self.inputs.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let mut m = Map::new();
        m.insert("quantity".into(), Value::String(self.quantity.clone()));
        m.insert("inputs".into(), Value::Object(inputs));
        m.insert("value_re".into(), num(self.value_re));
        m.insert("value_im".into(), num(self.value_im));
        m.insert("err".into(), self.err.map_or(Value::Null, num));
        Value::Object(m)
    }
}

impl CheckRecord {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("id".into(), Value::String(self.id.clone()));
        m.insert("paper_ref".into(), Value::String(self.paper_ref.clone()));
        m.insert("residual".into(), num(self.residual));
        m.insert("tolerance".into(), num(self.tolerance));
        m.insert("pass".into(), Value::Bool(self.pass));
        Value::Object(m)
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let records: Vec<Value> = match &self.records {
            Records::Eval(r) => r.iter().map(EvalRecord::to_json).collect(),
            Records::Check(r) => r.iter().map(CheckRecord::to_json).collect(),
        };
        let mut top = Map::new();
        top.insert("version".into(), Value::String(VERSION.into()));
        top.insert("config".into(), Value::Object(self.config.iter().cloned().collect()));
        top.insert("records".into(), Value::Array(records));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let res = match &self.records {
            Records::Eval(recs) => {
                let mut res = w.write_record(["quantity", "inputs", "value_re", "value_im", "err"]);
                for r in recs {
                    let inputs = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
                    let err = r.err.map(num_text).unwrap_or_default();
                    res = res.and(w.write_record([r.quantity.as_str(), &inputs, &num_text(r.value_re), &num_text(r.value_im), &err]));
                }
                res
            }
            Records::Check(recs) => {
                let mut res = w.write_record(["id", "paper_ref", "residual", "tolerance", "pass"]);
                for r in recs {
                    res = res.and(w.write_record([
                        r.id.as_str(),
                        &r.paper_ref,
                        &num_text(r.residual),
                        &num_text(r.tolerance),
                        if r.pass { "true" } else { "false" },
                    ]));
                }
                res
            }
        };
        res.expect("writing to memory cannot fail");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}
