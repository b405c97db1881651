use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

/// Reals are written with 17 significant digits in exponent form, with
/// a signed exponent (`1.5000000000000000e+0`).
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        let s = format!("{x:.16e}");
        match s.split_once('e') {
            Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
            _ => s,
        }
    }
}

/// JSON number with the same formatting as [`fmt_real`]; non-finite
/// values become strings.
pub fn real(x: f64) -> Value {
    let s = fmt_real(x);
    if x.is_finite() {
        Value::Number(s.parse::<Number>().expect("formatted float is a JSON number"))
    } else {
        Value::String(s)
    }
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| real(x)).collect())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Maximal runs of masked grid points as `[first, last]` parameter pairs.
pub fn masked_intervals(grid: &[f64], masked: &[bool]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=grid.len() {
        let m = i < grid.len() && masked[i];
        match (m, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((grid[s], grid[i - 1]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Intervals from an explicit list of masked parameters on `grid`.
pub fn masked_from_list(grid: &[f64], masked: &[f64]) -> Vec<(f64, f64)> {
    let flags: Vec<bool> = grid.iter().map(|t| masked.contains(t)).collect();
    masked_intervals(grid, &flags)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputHash {
    pub name: String,
    pub sha256: String,
}

impl InputHash {
    pub fn new(name: impl Into<String>, bytes: &[u8]) -> Self {
        Self {
            name: name.into(),
            sha256: sha256_hex(bytes),
        }
    }
}

/// Machine-readable outcome of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub parameters: Map<String, Value>,
    pub results: Value,
    pub masked_intervals: Vec<(f64, f64)>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Vec::new(),
            parameters: Map::new(),
            results: Value::Null,
            masked_intervals: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: Value) -> &mut Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert(
            "inputs".into(),
            Value::Array(
                self.inputs
                    .iter()
                    .map(|i| {
                        let mut o = Map::new();
                        o.insert("name".into(), Value::String(i.name.clone()));
                        o.insert("sha256".into(), Value::String(i.sha256.clone()));
                        Value::Object(o)
                    })
                    .collect(),
            ),
        );
        m.insert("parameters".into(), Value::Object(self.parameters.clone()));
        m.insert("results".into(), self.results.clone());
        m.insert(
            "masked_intervals".into(),
            Value::Array(self.masked_intervals.iter().map(|&(a, b)| reals(&[a, b])).collect()),
        );
        m.insert(
            "tool_version".into(),
            Value::String(concat!("bertrand-kit ", env!("CARGO_PKG_VERSION")).into()),
        );
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

/// CSV text with a header row; reals go through [`fmt_real`].
pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r.iter().map(|&x| fmt_real(x))).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}
