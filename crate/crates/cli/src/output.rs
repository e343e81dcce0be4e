//! Rendering of report documents as JSON, CSV or text.

use serde_json::{Map, Value};

use crate::{CliError, Format, SCHEMA_VERSION};

/// Rows for the CSV rendering of a report.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Report {
    pub command: &'static str,
    pub result: Value,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &'static str, result: Value) -> Report {
        Report { command, result, table: None }
    }

    pub fn with_table(mut self, headers: Vec<&'static str>, rows: Vec<Vec<String>>) -> Report {
        self.table = Some(Table { headers, rows });
        self
    }

    pub fn document(&self) -> Value {
        envelope(self.command, "result", self.result.clone())
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(pretty(&self.document())),
            Format::Text => Ok(text(&self.document())),
            Format::Csv => match &self.table {
                Some(table) => Ok(csv(table)),
                None => Err(CliError::usage(format!("csv output is not available for '{}'", self.command))),
            },
        }
    }
}

pub fn envelope(command: &str, key: &str, body: Value) -> Value {
    let mut doc = Map::new();
    doc.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    doc.insert("command".into(), Value::from(command));
    doc.insert(key.into(), body);
    Value::Object(doc)
}

pub fn pretty(doc: &Value) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents are plain JSON values");
    out.push('\n');
    out
}

fn csv(table: &Table) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let written = w
        .write_record(["schema_version", &SCHEMA_VERSION.to_string()])
        .and_then(|()| w.write_record(&table.headers))
        .and_then(|()| table.rows.iter().try_for_each(|row| w.write_record(row)));
    written.expect("writing to memory cannot fail");
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("cells are UTF-8")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push(format!("{prefix}: [{}]", parts.join(", ")));
        }
        other => out.push(format!("{prefix}: {}", scalar(other))),
    }
}

/// One `path: value` line per leaf.
pub fn text(doc: &Value) -> String {
    let mut lines = Vec::new();
    flatten("", doc, &mut lines);
    let mut out = lines.join("\n");
    out.push('\n');
    out
}
