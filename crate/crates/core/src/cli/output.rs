//! Rendering of command results and the run manifest.
//!
//! A command yields either a stream of records closed by a summary, or one
//! report. JSON output is one object per line; CSV output writes the records
//! (or the flattened report) as a table and moves the summary to stderr.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::{SCHEMA, VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// What a command produced.
#[derive(Debug)]
pub enum Output {
    Stream { kind: &'static str, columns: Vec<&'static str>, rows: Vec<Value>, summary: Value },
    Report { kind: &'static str, body: Value },
}

/// A command result plus an optional failure detected after the data was
/// produced (the data is still written).
#[derive(Debug)]
pub struct Outcome {
    pub output: Output,
    pub failure: Option<crate::Error>,
}

impl From<Output> for Outcome {
    fn from(output: Output) -> Self {
        Outcome { output, failure: None }
    }
}

fn tagged(kind: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA.into());
    m.insert("kind".into(), kind.into());
    match body {
        Value::Object(o) => m.extend(o),
        other => {
            m.insert("value".into(), other);
        }
    }
    Value::Object(m)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn to_csv(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> std::io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

/// Renders to `(payload, side_channel)`; the side channel holds what does
/// not fit the chosen format (the CSV summary line).
pub fn render(output: &Output, format: Format) -> std::io::Result<(Vec<u8>, Option<String>)> {
    match (output, format) {
        (Output::Stream { rows, summary, .. }, Format::Json) => {
            let mut buf = Vec::new();
            for r in rows {
                serde_json::to_writer(&mut buf, r)?;
                buf.push(b'\n');
            }
            serde_json::to_writer(&mut buf, &tagged("summary", summary.clone()))?;
            buf.push(b'\n');
            Ok((buf, None))
        }
        (Output::Stream { columns, rows, summary, .. }, Format::Csv) => {
            let header: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
            let body = rows.iter().map(|r| columns.iter().map(|c| cell(&r[*c])).collect());
            Ok((to_csv(&header, body)?, Some(tagged("summary", summary.clone()).to_string())))
        }
        (Output::Report { kind, body }, Format::Json) => {
            let mut buf = serde_json::to_vec(&tagged(kind, body.clone()))?;
            buf.push(b'\n');
            Ok((buf, None))
        }
        (Output::Report { kind, body }, Format::Csv) => {
            let Value::Object(o) = tagged(kind, body.clone()) else { unreachable!("tagged always yields an object") };
            let header: Vec<String> = o.keys().cloned().collect();
            let row: Vec<String> = o.values().map(cell).collect();
            Ok((to_csv(&header, std::iter::once(row))?, None))
        }
    }
}

/// Provenance record written next to every payload.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub command: String,
    pub parameters: Value,
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub payload_sha256: String,
    pub payload_bytes: usize,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, payload: &[u8]) -> Self {
        let timestamp_unix =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let digest = Sha256::digest(payload);
        RunManifest {
            schema: SCHEMA,
            command: command.to_string(),
            parameters,
            version: VERSION,
            timestamp_unix,
            payload_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            payload_bytes: payload.len(),
        }
    }
}

pub fn write_line(w: &mut dyn Write, s: &str) {
    // Nothing sensible to do if stderr is gone.
    let _ = writeln!(w, "{s}");
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_stream_ends_with_schema_summary() {
        let out = Output::Stream {
            kind: "t",
            columns: vec!["a"],
            rows: vec![json!({"a": 1}), json!({"a": 2})],
            summary: json!({"total": 2}),
        };
        let (buf, side) = render(&out, Format::Json).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        let last: Value = serde_json::from_str(lines[2]).unwrap();
        assert_eq!(last["schema"], SCHEMA);
        assert_eq!(last["total"], 2);
        assert!(side.is_none());
    }

    #[test]
    fn csv_report_flattens_nested_values() {
        let out = Output::Report { kind: "r", body: json!({"x": 1.5, "v": [1, 2], "s": "a,b"}) };
        let (buf, _) = render(&out, Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let rec = rd.records().next().unwrap().unwrap();
        let headers = rd.headers().unwrap().clone();
        let get = |k: &str| rec.get(headers.iter().position(|h| h == k).unwrap()).unwrap().to_string();
        assert_eq!(get("v"), "[1,2]");
        assert_eq!(get("s"), "a,b");
        assert_eq!(get("schema"), SCHEMA);
    }

    #[test]
    fn manifest_hashes_payload() {
        let m = RunManifest::new("x", json!({}), b"abc");
        assert_eq!(m.payload_sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
