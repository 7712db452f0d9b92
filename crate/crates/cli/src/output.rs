//! CSV and JSON rendering with 12 significant digits.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Number, Value};
use superswitch_core::analysis::{format_sig, round_sig};
use superswitch_core::SweepTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn num_text(x: f64) -> String {
    format_sig(x)
}

pub fn num(x: f64) -> Value {
    Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
}

/// Rounds every float in a serialized value.
pub fn rounded<T: Serialize>(v: &T) -> Result<Value> {
    fn walk(v: Value) -> Value {
        match v {
            Value::Number(n) if n.is_f64() => num(n.as_f64().expect("f64")),
            Value::Array(a) => Value::Array(a.into_iter().map(walk).collect()),
            Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, walk(v))).collect()),
            other => other,
        }
    }
    Ok(walk(serde_json::to_value(v)?))
}

pub fn json_text(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn csv_text(header: &[String], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| num_text(*x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn table_csv(t: &SweepTable) -> String {
    let header: Vec<String> = t.parameter_names.iter().chain(&t.columns).cloned().collect();
    csv_text(
        &header,
        t.rows
            .iter()
            .map(|r| r.params.iter().chain(&r.values).copied().collect()),
    )
}

pub fn table_json(t: &SweepTable, ensemble: &str) -> Value {
    let rows = t
        .rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            for (k, v) in t.parameter_names.iter().zip(&r.params) {
                m.insert(k.clone(), num(*v));
            }
            for (k, v) in t.columns.iter().zip(&r.values) {
                m.insert(k.clone(), num(*v));
            }
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("family".into(), Value::String(t.family.clone()));
    m.insert("ensemble".into(), Value::String(ensemble.into()));
    m.insert("parameters".into(), serde_json::json!(t.parameter_names));
    m.insert("columns".into(), serde_json::json!(t.columns));
    m.insert("skipped".into(), Value::from(t.skipped));
    m.insert("rows".into(), Value::Array(rows));
    Value::Object(m)
}

/// Writes to `out`, or stdout when absent.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}
