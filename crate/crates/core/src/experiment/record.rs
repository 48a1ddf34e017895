use std::collections::BTreeMap;
use std::io::{self, Write};

use serde_json::{json, Map, Value};

use super::config::{Experiment, OutputFormat};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Cell {
    /// CSV text; floats always carry 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format!("{f:.16e}"),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => json!(i),
            Cell::Float(f) => json!(f),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(f) => Some(*f),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Output of one experiment: a config echo, a table and a summary block.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub experiment: Experiment,
    pub config: BTreeMap<&'static str, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
    /// Wall-clock seconds per stage. Only written when `include_timings` is set,
    /// so that default output is reproducible byte for byte.
    pub timings: Vec<(&'static str, f64)>,
    pub include_timings: bool,
}

impl ResultRecord {
    pub fn new(experiment: Experiment, config: BTreeMap<&'static str, String>, columns: &[&str]) -> Self {
        ResultRecord {
            experiment,
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            timings: Vec::new(),
            include_timings: false,
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn summarize(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<impl Iterator<Item = &Cell> + '_> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(move |r| &r[i]))
    }

    pub fn write(&self, format: OutputFormat, w: impl Write) -> io::Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(w),
            OutputFormat::Json => self.write_json(w),
        }
    }

    /// Header comment lines with the config, the table, then summary comment lines.
    pub fn write_csv(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "# quantum-baker {}", self.experiment.name())?;
        for (k, v) in &self.config {
            writeln!(w, "# {k} = {v}")?;
        }
        {
            let mut table = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut w);
            table.write_record(&self.columns)?;
            for row in &self.rows {
                table.write_record(row.iter().map(Cell::render))?;
            }
            table.flush()?;
        }
        for (k, v) in &self.summary {
            writeln!(w, "# {k} = {}", v.render())?;
        }
        if self.include_timings {
            for (k, v) in &self.timings {
                writeln!(w, "# time_{k}_s = {v:.6}")?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let config: Map<String, Value> = self.config.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.to_json())).collect()))
            .collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.to_string(), v.to_json())).collect();
        let mut top = Map::new();
        top.insert("config".into(), Value::Object(config));
        top.insert("rows".into(), Value::Array(rows));
        top.insert("summary".into(), Value::Object(summary));
        if self.include_timings {
            top.insert(
                "timings".into(),
                Value::Object(self.timings.iter().map(|(k, v)| (k.to_string(), json!(v))).collect()),
            );
        }
        Value::Object(top)
    }

    pub fn write_json(&self, mut w: impl Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.to_json())?;
        writeln!(w)
    }
}
