//! Tabular results and their CSV / JSON / gnuplot renderings.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use toroid_vdw::Evaluation;

use crate::config::RunConfig;
use crate::CliError;

/// Shortest round-trip decimal, in exponent form outside `[1e-4, 1e15)`.
pub fn format_value(v: f64) -> String {
    let m = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if !v.is_finite() || (1e-4..1e15).contains(&m) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Series bookkeeping for one emitted row.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PointDiagnostic {
    pub terms: usize,
    pub tail: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl From<&Evaluation> for PointDiagnostic {
    fn from(e: &Evaluation) -> Self {
        Self {
            terms: e.terms,
            tail: e.tail,
            warning: e.warning.map(|w| format!("{w:?}")),
        }
    }
}

/// Which columns the gnuplot script draws.
#[derive(Debug, Clone, Default)]
pub struct PlotSpec {
    pub x: usize,
    pub raw: Vec<usize>,
    pub norm: Vec<usize>,
    /// `(x, y, value)` columns for a map plot.
    pub surface: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub points: Vec<PointDiagnostic>,
    pub notes: Vec<(String, Value)>,
    pub plot: PlotSpec,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            points: Vec::new(),
            notes: Vec::new(),
            plot: PlotSpec::default(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.notes.push((key.to_string(), json!(value)));
    }

    pub fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_value(*v)))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn json(&self, cfg: &RunConfig, command: &str) -> Value {
        let mut diagnostics = serde_json::Map::new();
        diagnostics.insert("library_version".into(), json!(toroid_vdw::VERSION));
        diagnostics.insert("command".into(), json!(command));
        diagnostics.insert("points".into(), json!(self.points));
        for (k, v) in &self.notes {
            diagnostics.insert(k.clone(), v.clone());
        }
        json!({
            "config": cfg,
            "columns": self.columns,
            "rows": self.rows,
            "diagnostics": diagnostics,
        })
    }

    /// gnuplot script reading `data_name` from the script's directory.
    pub fn gnuplot(&self, data_name: &str, normalize: bool) -> String {
        let mut s = String::new();
        s.push_str("set datafile separator ','\n");
        s.push_str("set key autotitle columnhead\n");
        let quoted = format!("'{data_name}'");
        if let Some((x, y, v)) = self.plot.surface {
            s.push_str(&format!("set xlabel '{}'\nset ylabel '{}'\n", self.columns[x], self.columns[y]));
            s.push_str("set view map\nset dgrid3d\nset contour base\nset cntrparam levels discrete 0\n");
            s.push_str(&format!("splot {quoted} using {}:{}:{} with pm3d notitle\n", x + 1, y + 1, v + 1));
            return s;
        }
        let cols = if normalize && !self.plot.norm.is_empty() {
            &self.plot.norm
        } else {
            &self.plot.raw
        };
        s.push_str(&format!("set xlabel '{}'\n", self.columns[self.plot.x]));
        let parts: Vec<String> = cols
            .iter()
            .map(|c| format!("{quoted} using {}:{} with lines", self.plot.x + 1, c + 1))
            .collect();
        s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
        s
    }

    /// Writes the table to `out` (or stdout) in the configured format.
    pub fn emit(&self, cfg: &RunConfig, command: &str, out: Option<&Path>) -> Result<(), CliError> {
        let body = match cfg.format {
            crate::config::Format::Csv => self.csv()?,
            crate::config::Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json(cfg, command))?;
                s.push('\n');
                s
            }
        };
        match out {
            None => {
                std::io::stdout().lock().write_all(body.as_bytes())?;
            }
            Some(path) => {
                fs::write(path, body)?;
                if cfg.format == crate::config::Format::Csv {
                    let name = path
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    fs::write(path.with_extension("gp"), self.gnuplot(&name, cfg.normalize))?;
                }
            }
        }
        Ok(())
    }
}
