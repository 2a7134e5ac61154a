use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Everything a command prints. Parameters echo every resolved input,
/// defaults included.
#[derive(Debug, Clone, Serialize)]
pub struct OutputDocument {
    pub schema_version: &'static str,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
    pub warnings: Vec<String>,
}

impl OutputDocument {
    pub fn new(command: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters: Map::new(),
            rows: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut doc = self.clone();
        for v in doc.parameters.values_mut() {
            round_value(v);
        }
        for row in &mut doc.rows {
            for v in row.values_mut() {
                round_value(v);
            }
        }
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
                s.push('\n');
                s
            }
            Format::Csv => doc.to_csv(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# schema_version={}\n# command={}\n", self.schema_version, self.command));
        for (k, v) in &self.parameters {
            out.push_str(&format!("# parameter {k}={}\n", cell(v)));
        }
        for w in &self.warnings {
            out.push_str(&format!("# warning {w}\n"));
        }
        let mut wtr = csv::Writer::from_writer(Vec::new());
        if let Some(first) = self.rows.first() {
            wtr.write_record(first.keys()).expect("in-memory write");
            for row in &self.rows {
                wtr.write_record(first.keys().map(|k| row.get(k).map(cell).unwrap_or_default()))
                    .expect("in-memory write");
            }
        }
        out.push_str(&String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8"));
        out
    }
}

/// Round to 6 significant digits.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(sig6).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}
