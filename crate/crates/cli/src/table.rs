//! Deterministic table rendering for the CLI: CSV with a comment footer,
//! or a versioned JSON document. Exact rationals cross the boundary as
//! `num/den` strings; floats are display-only, rounded to 10 significant
//! digits.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use unispec_core::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A rendered result: header row, data rows, and a footer that always
/// carries the check identifier for the quantity shown.
pub struct Table {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub footer: BTreeMap<String, String>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Table {
            command: command.to_string(),
            params: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            footer: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn footer(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.footer.insert(key.to_string(), value.to_string());
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width mismatch");
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&csv_line(&self.columns));
        for row in &self.rows {
            out.push_str(&csv_line(row));
        }
        let footer = self
            .footer
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("# {footer}\n"));
        out
    }

    fn to_json(&self) -> String {
        let value = serde_json::json!({
            "schema": 1,
            "command": self.command,
            "params": self.params,
            "columns": self.columns,
            "rows": self.rows,
            "footer": self.footer,
        });
        let mut text = serde_json::to_string_pretty(&value).expect("tables serialize");
        text.push('\n');
        text
    }
}

fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells.iter().map(|c| csv_field(c)).collect();
    format!("{}\n", quoted.join(","))
}

fn csv_field(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Ten-significant-digit display value of an exact rational.
pub fn approx10(value: &Rational) -> String {
    format!("{:.9e}", value.to_f64().unwrap_or(f64::NAN))
}
