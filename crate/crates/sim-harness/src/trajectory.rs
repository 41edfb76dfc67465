//! Column-oriented trajectory tables and their file formats.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::config::OutputFormat;

/// Columns written as integers; everything else is a real.
pub const INTEGER_COLUMNS: [&str; 6] = ["k", "branch", "roots", "iters", "orbit", "tag"];
/// Prefix of conserved or monitored quantities.
pub const INVARIANT_PREFIX: &str = "inv_";

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}, line {line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Free-form results attached to the run (failure, geometry checks, config).
    pub summary: BTreeMap<String, String>,
}

impl Trajectory {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn invariant_columns(&self) -> Vec<&str> {
        self.columns.iter().filter(|c| c.starts_with(INVARIANT_PREFIX)).map(String::as_str).collect()
    }

    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<(), TrajectoryError> {
        match format {
            OutputFormat::Csv => {
                self.write_csv(path)?;
                write_summary(&sidecar_path(path), &self.summary)
            }
            OutputFormat::Json => self.write_json(path),
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), TrajectoryError> {
        let io = |e: csv::Error| TrajectoryError::Io { path: path.to_path_buf(), source: e.into() };
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path).map_err(io)?;
        w.write_record(&self.columns).map_err(io)?;
        let ints: Vec<bool> = self.columns.iter().map(|c| INTEGER_COLUMNS.contains(&c.as_str())).collect();
        for row in &self.rows {
            w.write_record(row.iter().zip(&ints).map(|(x, &int)| format_cell(*x, int))).map_err(io)?;
        }
        w.flush().map_err(|e| TrajectoryError::Io { path: path.to_path_buf(), source: e })
    }

    pub fn to_json(&self) -> Value {
        let ints: Vec<bool> = self.columns.iter().map(|c| INTEGER_COLUMNS.contains(&c.as_str())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter().zip(&ints).map(|(x, &int)| if int { json!(*x as i64) } else { json!(x) }).collect(),
                )
            })
            .collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({ "columns": self.columns, "rows": rows, "summary": summary })
    }

    pub fn write_json(&self, path: &Path) -> Result<(), TrajectoryError> {
        let mut text = serde_json::to_string_pretty(&self.to_json()).expect("json values are finite");
        text.push('\n');
        fs::write(path, text).map_err(|e| TrajectoryError::Io { path: path.to_path_buf(), source: e })
    }

    /// Reads a file written by [`Trajectory::write`]; the format follows the extension.
    pub fn read(path: &Path) -> Result<Self, TrajectoryError> {
        if path.extension().is_some_and(|e| e == "json") {
            Self::read_json(path)
        } else {
            let mut t = Self::read_csv(path)?;
            let side = sidecar_path(path);
            if side.exists() {
                t.summary = read_summary(&side)?;
            }
            Ok(t)
        }
    }

    pub fn read_csv(path: &Path) -> Result<Self, TrajectoryError> {
        let text = fs::read_to_string(path).map_err(|e| TrajectoryError::Io { path: path.to_path_buf(), source: e })?;
        let perr = |line: usize, message: String| TrajectoryError::Parse { path: path.to_path_buf(), line, message };
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| perr(1, e.to_string()))?.clone();
        let mut t = Trajectory { columns: header.iter().map(str::to_string).collect(), ..Self::default() };
        for (i, rec) in r.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| perr(line, e.to_string()))?;
            if rec.len() != t.columns.len() {
                return Err(perr(line, format!("expected {} fields, got {}", t.columns.len(), rec.len())));
            }
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|_| perr(line, format!("`{s}` is not a number"))))
                .collect::<Result<Vec<f64>, _>>()?;
            t.rows.push(row);
        }
        Ok(t)
    }

    pub fn read_json(path: &Path) -> Result<Self, TrajectoryError> {
        let text = fs::read_to_string(path).map_err(|e| TrajectoryError::Io { path: path.to_path_buf(), source: e })?;
        let perr = |line: usize, message: String| TrajectoryError::Parse { path: path.to_path_buf(), line, message };
        let v: Value = serde_json::from_str(&text).map_err(|e| perr(e.line(), e.to_string()))?;
        let columns: Vec<String> = v["columns"]
            .as_array()
            .ok_or_else(|| perr(1, "missing `columns`".into()))?
            .iter()
            .map(|c| c.as_str().map(str::to_string).ok_or_else(|| perr(1, "column names must be strings".into())))
            .collect::<Result<_, _>>()?;
        let mut rows = Vec::new();
        for (i, r) in v["rows"].as_array().ok_or_else(|| perr(1, "missing `rows`".into()))?.iter().enumerate() {
            let row: Vec<f64> = r
                .as_array()
                .ok_or_else(|| perr(1, format!("row {i} is not an array")))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| perr(1, format!("row {i} has a non-number"))))
                .collect::<Result<_, _>>()?;
            if row.len() != columns.len() {
                return Err(perr(1, format!("row {i} has {} fields, expected {}", row.len(), columns.len())));
            }
            rows.push(row);
        }
        let summary = v["summary"]
            .as_object()
            .map(|m| m.iter().map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string())).collect())
            .unwrap_or_default();
        Ok(Trajectory { columns, rows, summary })
    }
}

/// 17 significant digits so every double round-trips.
pub fn format_cell(x: f64, integer: bool) -> String {
    if integer {
        format!("{}", x as i64)
    } else {
        format!("{x:.16e}")
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".summary");
    PathBuf::from(s)
}

pub fn write_summary(path: &Path, summary: &BTreeMap<String, String>) -> Result<(), TrajectoryError> {
    let text: String = summary.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    fs::write(path, text).map_err(|e| TrajectoryError::Io { path: path.to_path_buf(), source: e })
}

pub fn read_summary(path: &Path) -> Result<BTreeMap<String, String>, TrajectoryError> {
    let text = fs::read_to_string(path).map_err(|e| TrajectoryError::Io { path: path.to_path_buf(), source: e })?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line.split_once(" = ").ok_or_else(|| TrajectoryError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: "expected `key = value`".into(),
        })?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}
