// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON writers with a provenance header.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::experiments::Artifact;

pub const TOOL: &str = "lattice-optics";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to reproduce an artifact.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub experiment: String,
    pub config: Value,
    pub resolved: Map<String, Value>,
    /// Unix seconds, only when requested.
    pub timestamp: Option<u64>,
}

impl Provenance {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("tool".into(), json!(TOOL));
        m.insert("version".into(), json!(VERSION));
        m.insert("experiment".into(), json!(self.experiment));
        m.insert("config".into(), self.config.clone());
        m.insert("resolved".into(), Value::Object(self.resolved.clone()));
        if let Some(t) = self.timestamp {
            m.insert("timestamp".into(), json!(t));
        }
        Value::Object(m)
    }
}

/// Typed JSON value of a table cell.
fn cell(s: &str) -> Value {
    if s.is_empty() {
        return Value::Null;
    }
    if let Ok(i) = s.parse::<i64>() {
        return json!(i);
    }
    if let Ok(b) = s.parse::<bool>() {
        return json!(b);
    }
    match s.parse::<f64>() {
        Ok(x) => serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number),
        Err(_) => json!(s),
    }
}

pub fn write<W: Write>(mut w: W, format: Format, prov: &Provenance, art: &Artifact) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "# {TOOL} {VERSION}")?;
            writeln!(w, "# experiment: {}", prov.experiment)?;
            writeln!(w, "# config: {}", prov.config)?;
            writeln!(w, "# resolved: {}", Value::Object(prov.resolved.clone()))?;
            if let Some(t) = prov.timestamp {
                writeln!(w, "# timestamp: {t}")?;
            }
            art.table.write_csv(&mut w)?;
        }
        Format::Json => {
            let records: Vec<Value> = art
                .table
                .rows
                .iter()
                .map(|row| Value::Object(art.table.columns.iter().cloned().zip(row.iter().map(|c| cell(c))).collect()))
                .collect();
            let doc = json!({
                "provenance": prov.to_json(),
                "columns": art.table.columns,
                "records": records,
            });
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use lattice_optics::export::Table;

    fn sample() -> (Provenance, Artifact) {
        let mut table = Table::new(&["family", "k", "E"]);
        table.push(["I", "1", "0.5"]);
        table.push(["oob", "0", ""]);
        let prov = Provenance {
            experiment: "x".into(),
            config: json!({"L": 5}),
            resolved: Map::new(),
            timestamp: None,
        };
        (prov, Artifact { table, resolved: Map::new() })
    }

    #[test]
    fn csv_header_then_table() {
        let (prov, art) = sample();
        let mut buf = vec![];
        write(&mut buf, Format::Csv, &prov, &art).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let data: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data, ["family,k,E", "I,1,0.5", "oob,0,"]);
        assert!(s.contains("# config: {\"L\":5}"));
        assert!(!s.contains("timestamp"));
    }

    #[test]
    fn json_records_keep_column_order() {
        let (prov, art) = sample();
        let mut buf = vec![];
        write(&mut buf, Format::Json, &prov, &art).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        let rec = v["records"][0].as_object().unwrap();
        assert_eq!(rec.keys().collect::<Vec<_>>(), ["family", "k", "E"]);
        assert_eq!(rec["k"], json!(1));
        assert_eq!(v["records"][1]["E"], Value::Null);
        assert_eq!(v["provenance"]["experiment"], "x");
    }
}
