use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::format::{round_json, sig6};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    /// One JSON record per line.
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommandInfo {
    pub name: String,
    pub params: Map<String, Value>,
}

/// Everything a subcommand reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: CommandInfo,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl RunReport {
    pub fn new(name: &str, params: Value, results: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        Self {
            command: CommandInfo {
                name: name.into(),
                params,
            },
            results,
            verification: None,
            timestamp: None,
        }
    }

    pub fn with_verification(mut self, v: Value) -> Self {
        self.verification = Some(v);
        self
    }

    /// The report as a JSON tree with every float at six significant digits.
    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_json(&mut v);
        v
    }

    pub fn write<W: Write>(&self, out: &mut W, format: OutputFormat) -> io::Result<()> {
        let v = self.to_value();
        match format {
            OutputFormat::Json => writeln!(out, "{v}"),
            OutputFormat::Text => write_text(out, &v),
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if !(n.is_i64() || n.is_u64()) => sig6(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(", "),
        Value::Object(_) => String::new(),
    }
}

fn is_table(items: &[Value]) -> bool {
    !items.is_empty() && items.iter().all(Value::is_object)
}

fn write_table<W: Write>(out: &mut W, indent: usize, rows: &[Value]) -> io::Result<()> {
    let mut columns: Vec<String> = Vec::new();
    for row in rows {
        for k in row.as_object().into_iter().flat_map(|m| m.keys()) {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            columns
                .iter()
                .map(|c| r.get(c).map(scalar).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|r| r[i].len())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |fields: Vec<&str>| {
        let padded: Vec<String> = fields
            .iter()
            .zip(&widths)
            .map(|(f, w)| format!("{f:<w$}"))
            .collect();
        format!("{:indent$}{}", "", padded.join("  ").trim_end())
    };
    writeln!(out, "{}", line(columns.iter().map(String::as_str).collect()))?;
    for row in &cells {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn write_map<W: Write>(out: &mut W, indent: usize, map: &Map<String, Value>) -> io::Result<()> {
    let width = map.keys().map(String::len).max().unwrap_or(0);
    for (k, v) in map {
        match v {
            Value::Object(inner) => {
                writeln!(out, "{:indent$}{k}:", "")?;
                write_map(out, indent + 2, inner)?;
            }
            Value::Array(items) if is_table(items) => {
                writeln!(out, "{:indent$}{k}:", "")?;
                write_table(out, indent + 2, items)?;
            }
            _ => writeln!(out, "{:indent$}{k:<width$}  {}", "", scalar(v))?,
        }
    }
    Ok(())
}

fn write_text<W: Write>(out: &mut W, v: &Value) -> io::Result<()> {
    match v {
        Value::Object(map) => write_map(out, 0, map),
        other => writeln!(out, "{}", scalar(other)),
    }
}
