//! Command results and their three renderings.

use serde_json::{Map, Value};

use crate::args::Format;
use crate::csv_io::CsvTable;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    /// 17 significant digits.
    pub fn machine(&self) -> String {
        match self {
            Self::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Self::Num(x) => x.to_string(),
            Self::Int(i) => i.to_string(),
            Self::Bool(b) => b.to_string(),
            Self::Text(s) => s.clone(),
            Self::Empty => String::new(),
        }
    }

    /// 6 significant digits.
    pub fn human(&self) -> String {
        match self {
            Self::Num(x) => sig6(*x),
            Self::Empty => "-".into(),
            other => other.machine(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Self::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Self::Int(i) => Value::from(*i),
            Self::Bool(b) => Value::Bool(*b),
            Self::Text(s) => Value::String(s.clone()),
            Self::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Self::Int(i as i64)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Self::Int(i64::from(i))
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Self::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(o: Option<T>) -> Self {
        o.map_or(Self::Empty, Into::into)
    }
}

/// `%g`-style rendering with six significant digits.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        };
        // Rounding can carry into a new digit (999999.5 -> 1000000).
        if s.trim_start_matches('-')
            .replace('.', "")
            .trim_start_matches('0')
            .len()
            > 6
        {
            return format!("{x:.5e}");
        }
        s
    } else {
        let s = format!("{x:.5e}");
        let (mant, e) = s.split_once('e').unwrap_or((&s, "0"));
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{e}")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    /// Every input that influenced the result.
    pub inputs: Map<String, Value>,
    pub results: Vec<(String, Cell)>,
    pub table: Option<Table>,
    pub notes: Vec<(String, Cell)>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: Map::new(),
            results: Vec::new(),
            table: None,
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_owned(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.results.push((key.to_owned(), value.into()));
        self
    }

    pub fn note(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.notes.push((key.to_owned(), value.into()));
        self
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv_table().emit(),
            Format::Table => Ok(self.to_text()),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.into()));
        root.insert("inputs".into(), Value::Object(self.inputs.clone()));
        for (k, v) in &self.results {
            root.insert(k.clone(), v.json());
        }
        if let Some(t) = &self.table {
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        t.header
                            .iter()
                            .cloned()
                            .zip(r.iter().map(Cell::json))
                            .collect(),
                    )
                })
                .collect();
            root.insert("rows".into(), Value::Array(rows));
        }
        if !self.notes.is_empty() {
            let notes = self
                .notes
                .iter()
                .map(|(k, v)| (k.clone(), v.json()))
                .collect();
            root.insert("summary".into(), Value::Object(notes));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root))
            .map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Data rows with scalar results and inputs in the footer. Reports without
    /// a table become two-column `key,value` documents.
    pub fn to_csv_table(&self) -> CsvTable {
        let mut footer = Vec::new();
        let (header, rows) = match &self.table {
            Some(t) => {
                footer.extend(
                    self.results
                        .iter()
                        .map(|(k, v)| format!("{k}={}", v.machine())),
                );
                (
                    t.header.clone(),
                    t.rows
                        .iter()
                        .map(|r| r.iter().map(Cell::machine).collect())
                        .collect(),
                )
            }
            None => (
                vec!["key".to_owned(), "value".to_owned()],
                self.results
                    .iter()
                    .map(|(k, v)| vec![k.clone(), v.machine()])
                    .collect(),
            ),
        };
        footer.extend(
            self.notes
                .iter()
                .map(|(k, v)| format!("{k}={}", v.machine())),
        );
        footer.push(format!("command={}", self.command));
        footer.extend(
            self.inputs
                .iter()
                .map(|(k, v)| format!("input.{k}={}", json_inline(v))),
        );
        CsvTable {
            header,
            rows,
            footer,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.command));
        let scalars: Vec<(String, String)> = self
            .inputs
            .iter()
            .map(|(k, v)| (format!("input {k}"), json_inline(v)))
            .chain(self.results.iter().map(|(k, v)| (k.clone(), v.human())))
            .collect();
        let width = scalars
            .iter()
            .map(|(k, _)| k.chars().count())
            .max()
            .unwrap_or(0);
        for (k, v) in &scalars {
            out.push_str(&format!("  {k:<width$}  {v}\n"));
        }
        if let Some(t) = &self.table {
            out.push('\n');
            let cells: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::human).collect())
                .collect();
            let widths: Vec<usize> = (0..t.header.len())
                .map(|j| {
                    cells
                        .iter()
                        .filter_map(|r| r.get(j))
                        .map(|s| s.chars().count())
                        .chain([t.header[j].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |row: &[String]| {
                let parts: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect();
                format!("  {}\n", parts.join("  ").trim_end())
            };
            out.push_str(&line(&t.header));
            for r in &cells {
                out.push_str(&line(r));
            }
        }
        if !self.notes.is_empty() {
            out.push('\n');
            let width = self
                .notes
                .iter()
                .map(|(k, _)| k.chars().count())
                .max()
                .unwrap_or(0);
            for (k, v) in &self.notes {
                out.push_str(&format!("  {k:<width$}  {}\n", v.human()));
            }
        }
        out
    }
}

fn json_inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(json_inline).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}
