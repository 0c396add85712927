//! In-memory experiment reports. Layout is documented in
//! `docs/report-schema.md`.

use std::collections::BTreeMap;

use chanlab::concentration::central_values_of;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::HarnessError;

/// One cell of a per-trial record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    /// Value not computed (e.g. skipped for budget).
    Missing,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Num(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            Cell::Bool(b) => Some(b),
            _ => None,
        }
    }
}

pub type Row = BTreeMap<String, Cell>;

/// Builds a row from `(column, value)` pairs.
pub fn row<const N: usize>(cells: [(&str, Cell); N]) -> Row {
    cells.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Summary statistics for one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub k: usize,
    pub d: usize,
    pub m: usize,
    /// Keys are `statistic:column`, e.g. `median:gap_diagnostic`.
    pub values: BTreeMap<String, f64>,
}

impl GroupSummary {
    pub fn new(k: usize, d: usize, m: usize) -> Self {
        Self { k, d, m, values: BTreeMap::new() }
    }

    pub fn set(&mut self, key: &str, value: f64) {
        self.values.insert(key.to_string(), value);
    }

    /// Median, quartiles and mean of `column` over `rows`, skipping missing
    /// cells.
    pub fn add_quartiles(&mut self, column: &str, rows: &[Row]) {
        let vals: Vec<f64> = rows.iter().filter_map(|r| r.get(column).and_then(Cell::as_f64)).collect();
        if vals.is_empty() {
            return;
        }
        let cv = central_values_of(&vals);
        self.set(&format!("median:{column}"), cv.median);
        self.set(&format!("q1:{column}"), cv.q1);
        self.set(&format!("q3:{column}"), cv.q3);
        self.set(&format!("mean:{column}"), cv.mean);
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    /// `statistic:column|label`; the column part decides unit conversion.
    pub series: String,
}

/// Whether the numbers are proven bounds or optimizer estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub certified: bool,
    pub label: String,
    pub note: String,
}

impl Certification {
    pub fn indicative(note: &str) -> Self {
        Self { certified: false, label: "indicative".into(), note: note.into() }
    }

    pub fn exact(note: &str) -> Self {
        Self { certified: true, label: "exact".into(), note: note.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub library_version: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub certification: Certification,
    /// `nats` in memory; `bits` only in reports serialized with `--bits`.
    pub entropy_unit: String,
    /// Columns (and summary/plot entries on them) holding entropies.
    pub entropy_columns: Vec<String>,
    /// CSV header order.
    pub columns: Vec<String>,
    pub trials: Vec<Row>,
    pub summary: Vec<GroupSummary>,
    pub plot: Vec<PlotPoint>,
    /// Excluded from the canonical form used for replay comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ExperimentReport {
    pub fn new(config: &ExperimentConfig, columns: &[&str], certification: Certification) -> Self {
        Self {
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            command: config.command.clone(),
            config: config.clone(),
            certification,
            entropy_unit: "nats".into(),
            entropy_columns: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            trials: Vec::new(),
            summary: Vec::new(),
            plot: Vec::new(),
            timing: None,
        }
    }

    pub fn with_entropy_columns(mut self, cols: &[&str]) -> Self {
        self.entropy_columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    /// Adds `(k, y)` plot points for `key` over all groups, labelled by the
    /// grid shape so that points sharing `d/k²` and `m/d` form one series.
    pub fn plot_over_k(&mut self, key: &str) {
        for g in &self.summary {
            if let Some(y) = g.get(key) {
                let label = shape_label(g.k, g.d, g.m);
                self.plot.push(PlotPoint { x: g.k as f64, y, series: format!("{key}|{label}") });
            }
        }
    }

    /// Rejects any non-finite number.
    pub fn check_finite(&self) -> Result<(), HarnessError> {
        let bad = |what: String| Err(HarnessError::NonFinite(what));
        for (i, r) in self.trials.iter().enumerate() {
            for (col, cell) in r {
                if let Cell::Num(x) = cell {
                    if !x.is_finite() {
                        return bad(format!("trial {i}, column {col}"));
                    }
                }
            }
        }
        for g in &self.summary {
            for (key, v) in &g.values {
                if !v.is_finite() {
                    return bad(format!("summary {key} at k = {}, d = {}, m = {}", g.k, g.d, g.m));
                }
            }
        }
        for p in &self.plot {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return bad(format!("plot series {}", p.series));
            }
        }
        Ok(())
    }

    fn is_entropy_key(&self, key: &str) -> bool {
        let column = key.split_once(':').map_or(key, |(_, c)| c);
        let column = column.split('|').next().unwrap_or(column);
        self.entropy_columns.iter().any(|c| c == column)
    }

    /// The report as it should be serialized: entropies converted to bits
    /// when the config asks for it and they are still in nats.
    pub fn for_output(&self) -> ExperimentReport {
        let mut out = self.clone();
        if !(self.config.bits && self.entropy_unit == "nats") {
            return out;
        }
        let scale = std::f64::consts::LOG2_E;
        for r in &mut out.trials {
            for (col, cell) in r.iter_mut() {
                if let Cell::Num(x) = cell {
                    if self.is_entropy_key(col) {
                        *x *= scale;
                    }
                }
            }
        }
        for g in &mut out.summary {
            for (key, v) in g.values.iter_mut() {
                if self.is_entropy_key(key) {
                    *v *= scale;
                }
            }
        }
        for p in &mut out.plot {
            if self.is_entropy_key(&p.series) {
                p.y *= scale;
            }
        }
        out.entropy_unit = "bits".into();
        out
    }

    /// Serialized report without timing; equal across replays.
    pub fn canonical_json(&self) -> Result<String, HarnessError> {
        let mut r = self.for_output();
        r.timing = None;
        serde_json::to_string_pretty(&r).map_err(|e| HarnessError::Serialize(e.to_string()))
    }

    pub fn group(&self, k: usize, d: usize, m: usize) -> Option<&GroupSummary> {
        self.summary.iter().find(|g| (g.k, g.d, g.m) == (k, d, m))
    }
}

fn shape_label(k: usize, d: usize, m: usize) -> String {
    let k2 = (k * k) as f64;
    let mut label = format!("d/k^2={}", d as f64 / k2);
    if m > 0 {
        label.push_str(&format!(",m/d={}", m as f64 / d as f64));
    }
    label
}
