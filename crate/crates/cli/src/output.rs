//! Deterministic report rendering: identical parameters and seed must yield
//! byte-identical files, so all content is assembled as strings with
//! shortest-round-trip float formatting and written in one pass.

use std::path::Path;

use crate::config::OutputFormat;
use crate::CliError;

/// A rectangular report with fixed columns.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let items: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    // numeric cells stay numeric in JSON when they parse
                    let value = v
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .and_then(serde_json::Number::from_f64)
                        .map(serde_json::Value::Number)
                        .unwrap_or_else(|| serde_json::Value::String(v.clone()));
                    obj.insert((*c).to_string(), value);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut text =
            serde_json::to_string_pretty(&items).expect("report serialization cannot fail");
        text.push('\n');
        text
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Format a multi-index as a CSV-safe cell, e.g. "1;0".
pub fn alpha_cell(alpha: &[u32]) -> String {
    alpha
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Shortest-round-trip decimal rendering of a float.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn write_report(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    if let Some(path) = path {
        std::fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}
