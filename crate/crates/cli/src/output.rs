use std::fmt::Write as _;

use serde_json::{Map, Number, Value};
use steerlab::numfmt::sig;

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Num(x) => sig(*x),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(v) => Value::from(*v),
            // Round-trip through the 12-digit text so JSON and CSV agree.
            Cell::Num(x) => sig(*x).parse::<f64>().ok().and_then(Number::from_f64).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}
impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}
impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u8> for Cell {
    fn from(v: u8) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Single record shown as `key  value` lines in table format.
    vertical: bool,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![], vertical: false }
    }

    pub fn record(name: &str, fields: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) = fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Table { name: name.into(), columns, rows: vec![row], vertical: true }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn add(&mut self, t: Table) {
        self.tables.push(t);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table(),
            Format::Csv => self.csv(),
            Format::JsonLines => self.json_lines(),
        }
    }

    fn table(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if self.tables.len() > 1 {
                let _ = writeln!(out, "[{}]", t.name);
            }
            if t.vertical {
                let w = t.columns.iter().map(|c| c.len()).max().unwrap_or(0);
                for (c, v) in t.columns.iter().zip(&t.rows[0]) {
                    let _ = writeln!(out, "{c:<w$}  {}", v.render());
                }
                continue;
            }
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
            let widths: Vec<usize> = t
                .columns
                .iter()
                .enumerate()
                .map(|(j, c)| cells.iter().map(|r| r[j].len()).chain([c.len()]).max().unwrap_or(0))
                .collect();
            let line = |items: &[String]| {
                let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(&t.columns));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "{}", t.columns.join(","));
            for r in &t.rows {
                let row: Vec<String> = r.iter().map(|c| csv_field(&c.render())).collect();
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        out
    }

    fn json_lines(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            for r in &t.rows {
                let mut obj = Map::new();
                obj.insert("table".into(), Value::String(t.name.clone()));
                for (c, v) in t.columns.iter().zip(r) {
                    obj.insert(c.clone(), v.json());
                }
                let _ = writeln!(out, "{}", Value::Object(obj));
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "{}", serde_json::json!({ "note": n }));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
