//! Rendering and writing of command results.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// A computed result, ready for either output shape.
pub struct Document {
    /// Single-line JSON, already serialized in its final field order.
    pub json: String,
    /// Key/value rows for CSV output.
    pub rows: Vec<(String, String)>,
    /// Rectangular table that replaces the key/value rows in CSV mode
    /// (used for retained series).
    pub table: Option<Table>,
    /// Failure note, set when an experiment verdict did not pass.
    pub failed: Option<String>,
}

/// A rectangular CSV table with a fixed header.
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

pub fn render_json(doc: &Document) -> String {
    format!("{}\n", doc.json)
}

pub fn render_csv(doc: &Document) -> String {
    let mut out = String::new();
    if let Some(table) = &doc.table {
        out.push_str(&table.header.join(","));
        out.push('\n');
        for row in &table.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    } else {
        out.push_str("key,value\n");
        for (k, v) in &doc.rows {
            out.push_str(&csv_field(k));
            out.push(',');
            out.push_str(&csv_field(v));
            out.push('\n');
        }
    }
    out
}

/// Quotes a field when it contains a delimiter, a quote, or a line break.
fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}
