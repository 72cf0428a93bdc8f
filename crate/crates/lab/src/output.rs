//! Deterministic CSV and JSON artifacts with a metadata header.

use std::fmt::Write as _;
use std::path::Path;

use abca_core::io::{ca_to_json, measure_to_json};
use abca_core::spectral::MeasureSpec;
use abca_core::AbelianCA;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Fixed 12-significant-digit formatting; negative zero prints as zero.
pub fn float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub struct Meta {
    command: &'static str,
    entries: Vec<(String, String)>,
}

impl Meta {
    pub fn new(command: &'static str, ca_source: &str, f: &AbelianCA) -> Self {
        let mut m = Self {
            command,
            entries: Vec::new(),
        };
        m.push("ca", ca_source);
        m.push("ca_sha256", sha256_hex(ca_to_json(f).as_bytes()));
        m
    }

    pub fn with_measure(mut self, source: &str, mu: &MeasureSpec) -> Self {
        self.push("measure", source);
        self.push("measure_sha256", sha256_hex(measure_to_json(mu).as_bytes()));
        self
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.push(key, value);
        self
    }

    fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    fn header(&self) -> String {
        let mut s = format!("# abca-lab {VERSION}\n# command: {}\n", self.command);
        for (k, v) in &self.entries {
            let _ = writeln!(s, "# {k}: {v}");
        }
        s
    }

    fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        map.insert("command".into(), json!(self.command));
        map.insert("version".into(), json!(VERSION));
        for (k, v) in &self.entries {
            map.insert(k.clone(), json!(v));
        }
        Value::Object(map)
    }
}

pub struct Csv {
    meta: Meta,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(meta: Meta, columns: Vec<String>) -> Self {
        Self {
            meta,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut s = self.meta.header();
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| quote(c)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// `{"meta": .., "result": ..}` with sorted keys.
pub fn json_document(meta: &Meta, result: Value) -> String {
    let doc = json!({ "meta": meta.to_json(), "result": result });
    let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
    s.push('\n');
    s
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    }
}
