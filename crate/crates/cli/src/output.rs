//! Tables, JSON reports and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::{Manifest, OutputFormat, Settings};
use crate::error::CliResult;

/// Column-oriented data written as CSV (header row, unit-labelled columns)
/// or as a JSON array of records.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write_csv<W: Write>(&self, w: W) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|v| match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            }))?;
        }
        out.flush()?;
        Ok(())
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().cloned()).collect()))
                .collect(),
        )
    }
}

/// Shorthand for a numeric table cell.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub detail: String,
}

/// Stable top-level report schema.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub inputs: Value,
    pub constants: Value,
    pub results: Value,
    pub checks: BTreeMap<String, Check>,
}

impl Report {
    pub fn new(inputs: impl Serialize, constants: impl Serialize) -> CliResult<Self> {
        Ok(Self {
            inputs: serde_json::to_value(inputs)?,
            constants: serde_json::to_value(constants)?,
            results: Value::Object(Default::default()),
            checks: BTreeMap::new(),
        })
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> CliResult<()> {
        if let Value::Object(map) = &mut self.results {
            map.insert(key.to_string(), serde_json::to_value(value)?);
        }
        Ok(())
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.insert(
            name.to_string(),
            Check {
                pass,
                detail: detail.into(),
            },
        );
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, c)| !c.pass)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

/// Output directory for one run.
pub struct OutputDir {
    root: PathBuf,
    format: OutputFormat,
}

impl OutputDir {
    pub fn create(settings: &Settings) -> CliResult<Self> {
        fs::create_dir_all(&settings.out)?;
        Ok(Self {
            root: settings.out.clone(),
            format: settings.format,
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn format(&self) -> OutputFormat {
        self.format
    }

    /// Writes `stem.csv` or `stem.json` depending on the output format.
    pub fn table(&self, stem: &str, table: &Table) -> CliResult<PathBuf> {
        let path = self.path(&format!("{stem}.{}", self.format.extension()));
        let file = fs::File::create(&path)?;
        match self.format {
            OutputFormat::Csv => table.write_csv(std::io::BufWriter::new(file))?,
            OutputFormat::Json => write_json_to(file, &table.to_json())?,
        }
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn json(&self, name: &str, value: &impl Serialize) -> CliResult<PathBuf> {
        let path = self.path(name);
        write_json_to(fs::File::create(&path)?, value)?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn manifest(&self, manifest: &Manifest) -> CliResult<PathBuf> {
        self.json("manifest.json", manifest)
    }
}

fn write_json_to(file: fs::File, value: &impl Serialize) -> CliResult<()> {
    let mut w = std::io::BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> CliResult<Manifest> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_tables() {
        let mut t = Table::new(["x[m]", "label"]);
        t.push(vec![num(0.5), Value::from("a")]);
        t.push(vec![num(f64::NAN), Value::from("b")]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x[m],label\n0.5,a\n,b\n");
        assert_eq!(t.to_json()[0]["x[m]"], 0.5);
    }

    #[test]
    fn failed_checks_are_listed() {
        let mut r = Report::new(1, 2).unwrap();
        r.check("a", true, "");
        r.check("b", false, "bad");
        assert_eq!(r.failed_checks(), vec!["b"]);
    }
}
