//! CSV and JSON emitters shared by the subcommands.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use tmcomp::{Mat2C, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip an f64
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Named columns with their meaning and units.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub command: String,
    pub notes: Vec<String>,
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Option<Value>,
    pub warnings: Vec<String>,
    pub meta: Option<Value>,
}

impl Table {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn column(&mut self, name: &str, doc: &str) -> &mut Self {
        self.columns.push((name.into(), doc.into()));
        self
    }

    /// `{prefix}11_re, {prefix}11_im, …, {prefix}22_im`.
    pub fn matrix_columns(&mut self, prefix: &str, doc: &str) -> &mut Self {
        for ij in ["11", "12", "21", "22"] {
            for part in ["re", "im"] {
                self.column(
                    &format!("{prefix}{ij}_{part}"),
                    &format!("{part} part of entry {ij} of {doc}"),
                );
            }
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json()).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# tmcomp {}", self.command);
        if let Some(meta) = &self.meta {
            let _ = writeln!(out, "# meta {meta}");
        }
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        for (name, doc) in &self.columns {
            let _ = writeln!(out, "# {name}: {doc}");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "# warning: {w}");
        }
        let header: Vec<&str> = self.columns.iter().map(|c| c.0.as_str()).collect();
        let _ = writeln!(out, "{}", header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        if let Some(summary) = &self.summary {
            let _ = writeln!(out, "# summary {summary}");
        }
        out
    }

    fn json(&self) -> Value {
        let units: Map<String, Value> = self
            .columns
            .iter()
            .map(|(n, d)| (n.clone(), json!(d)))
            .collect();
        let results: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|((n, _), c)| (n.clone(), c.json()))
                        .collect(),
                )
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert(
            "schema_version".into(),
            json!(crate::config::SCHEMA_VERSION),
        );
        if let Some(meta) = &self.meta {
            obj.insert("meta".into(), meta.clone());
        }
        obj.insert("notes".into(), json!(self.notes));
        obj.insert("columns".into(), Value::Object(units));
        obj.insert("warnings".into(), json!(self.warnings));
        obj.insert("results".into(), Value::Array(results));
        if let Some(summary) = &self.summary {
            obj.insert("summary".into(), summary.clone());
        }
        Value::Object(obj)
    }
}

pub fn complex_cells(z: C64) -> [Cell; 2] {
    [Cell::Num(z.re), Cell::Num(z.im)]
}

pub fn matrix_cells(m: &Mat2C) -> Vec<Cell> {
    [m.a11, m.a12, m.a21, m.a22]
        .into_iter()
        .flat_map(complex_cells)
        .collect()
}

/// `{"re": …, "im": …}` for summaries.
pub fn complex_json(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}
