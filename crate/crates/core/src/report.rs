//! Structured reports rendered as markdown, JSON or CSV.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so every
//! format carries exact values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => x.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
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

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }

    pub fn with_columns(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self { name: name.into(), columns, rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }
}

#[macro_export]
macro_rules! row {
    ($($cell:expr),* $(,)?) => {
        vec![$($crate::report::Cell::from($cell)),*]
    };
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, Cell>,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            parameters: BTreeMap::new(),
        }
    }

    pub fn param(mut self, name: &str, value: impl Into<Cell>) -> Self {
        self.parameters.insert(name.to_string(), value.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub title: String,
    pub provenance: Provenance,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Markdown,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "md" | "markdown" => Ok(Format::Markdown),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}', expected md, json or csv")),
        }
    }
}

impl Report {
    pub fn new(title: impl Into<String>, provenance: Provenance) -> Self {
        Self { title: title.into(), provenance, tables: vec![], notes: vec![] }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Markdown => self.to_markdown(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}\n", self.title);
        let p = &self.provenance;
        let _ = writeln!(out, "- command: `{}`", p.command);
        let _ = writeln!(out, "- version: {}", p.version);
        if let Some(seed) = p.seed {
            let _ = writeln!(out, "- seed: {seed}");
        }
        for (k, v) in &p.parameters {
            let _ = writeln!(out, "- {k}: {}", v.render());
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n## {}\n", t.name);
            let _ = writeln!(out, "| {} |", t.columns.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(t.columns.len()));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| c.render().replace('|', "\\|")).collect();
                let _ = writeln!(out, "| {} |", cells.join(" | "));
            }
        }
        if !self.notes.is_empty() {
            let _ = writeln!(out, "\n## Notes\n");
            for n in &self.notes {
                let _ = writeln!(out, "- {n}");
            }
        }
        out
    }

    /// Sections separated by blank lines; each starts with a
    /// `section,<name>` record.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(vec![]);
        let p = &self.provenance;
        let _ = w.write_record(["section", "provenance"]);
        let _ = w.write_record(["title", self.title.as_str()]);
        let _ = w.write_record(["command", p.command.as_str()]);
        let _ = w.write_record(["version", p.version.as_str()]);
        if let Some(seed) = p.seed {
            let _ = w.write_record(["seed", seed.to_string().as_str()]);
        }
        for (k, v) in &p.parameters {
            let _ = w.write_record([k.clone(), v.render()]);
        }
        for t in &self.tables {
            let _ = w.write_record([""]);
            let _ = w.write_record(["section", t.name.as_str()]);
            let _ = w.write_record(&t.columns);
            for r in &t.rows {
                let _ = w.write_record(r.iter().map(Cell::render));
            }
        }
        if !self.notes.is_empty() {
            let _ = w.write_record([""]);
            let _ = w.write_record(["section", "notes"]);
            for n in &self.notes {
                let _ = w.write_record([n.as_str()]);
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", Provenance::new("demo --x").param("alpha", 0.8).seed(7));
        let mut t = Table::new("values", &["name", "value", "ok"]);
        t.push(row!["a|b", 0.1 + 0.2, true]);
        t.push(row!["c, d", Option::<f64>::None, false]);
        r.tables.push(t);
        r.notes.push("note".into());
        r
    }

    #[test]
    fn numbers_round_trip_through_every_format() {
        let r = sample();
        let x = 0.1 + 0.2;
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["tables"][0]["rows"][0][1].as_f64(), Some(x));
        assert!(r.to_markdown().contains(&x.to_string()));

        let csv_text = r.to_csv();
        let mut rd = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(csv_text.as_bytes());
        let found = rd
            .records()
            .filter_map(|rec| rec.ok())
            .any(|rec| rec.get(0) == Some("a|b") && rec.get(1).and_then(|v| v.parse::<f64>().ok()) == Some(x));
        assert!(found, "{csv_text}");
    }

    #[test]
    fn markdown_escapes_pipes() {
        assert!(sample().to_markdown().contains("a\\|b"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("md".parse::<Format>(), Ok(Format::Markdown));
        assert_eq!("csv".parse::<Format>(), Ok(Format::Csv));
        assert!("xml".parse::<Format>().is_err());
    }
}
