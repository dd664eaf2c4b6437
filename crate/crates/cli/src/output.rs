//! Result envelopes and the two output formats.

use std::time::Duration;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

use crate::commands::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

pub fn render(result: Result<Value, CliError>, format: Format, elapsed: Option<Duration>) -> (String, bool) {
    let ok = result.is_ok();
    let mut envelope = Map::new();
    match result {
        Ok(data) => {
            envelope.insert("status".into(), json!("ok"));
            envelope.insert("data".into(), data);
        }
        Err(e) => {
            envelope.insert("status".into(), json!("error"));
            envelope.insert("error".into(), json!({ "code": e.code, "message": e.message }));
        }
    }
    if let Some(d) = elapsed {
        envelope.insert("timing_ms".into(), json!(d.as_millis() as u64));
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&Value::Object(envelope)).expect("JSON values serialize"),
        Format::Table => table(&envelope),
    };
    (text, ok)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Two aligned columns: top-level fields, with `data` and `error` expanded.
fn table(envelope: &Map<String, Value>) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    for key in ["status", "data", "error", "timing_ms"] {
        let Some(value) = envelope.get(key) else { continue };
        match value {
            Value::Object(inner) if key == "data" || key == "error" => {
                rows.extend(inner.iter().map(|(k, v)| (k.clone(), cell(v))));
            }
            other => rows.push((key.to_string(), cell(other))),
        }
    }
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}
