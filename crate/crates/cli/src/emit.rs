//! Report serialization: pretty JSON with a fixed key order, per-trial CSV
//! and a plot-data CSV.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::config::OutputFormat;
use crate::report::{Cell, ExperimentReport};
use crate::HarnessError;

fn io_err(path: &Path, source: io::Error) -> HarnessError {
    HarnessError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path, e: csv::Error) -> HarnessError {
    io_err(path, io::Error::other(e))
}

/// JSON text of the report as emitted (entropy units applied).
pub fn to_json(report: &ExperimentReport) -> Result<String, HarnessError> {
    let mut text =
        serde_json::to_string_pretty(&report.for_output()).map_err(|e| HarnessError::Serialize(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn parse_json(text: &str) -> Result<ExperimentReport, HarnessError> {
    serde_json::from_str(text).map_err(|e| HarnessError::Serialize(format!("report JSON: {e}")))
}

fn cell_text(cell: Option<&Cell>) -> String {
    match cell {
        Some(Cell::Int(i)) => i.to_string(),
        // shortest representation that parses back to the same f64
        Some(Cell::Num(x)) => x.to_string(),
        Some(Cell::Bool(b)) => b.to_string(),
        Some(Cell::Missing) | None => String::new(),
    }
}

/// Per-trial CSV: header from `columns`, one data row per trial.
pub fn write_trials_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<(), csv::Error> {
    let report = report.for_output();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&report.columns)?;
    for r in &report.trials {
        w.write_record(report.columns.iter().map(|c| cell_text(r.get(c))))?;
    }
    w.flush()?;
    Ok(())
}

/// Plot-data CSV with columns `x,y,series`.
pub fn write_plot_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<(), csv::Error> {
    let report = report.for_output();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "series"])?;
    for p in &report.plot {
        w.write_record([p.x.to_string(), p.y.to_string(), p.series.clone()])?;
    }
    w.flush()?;
    Ok(())
}

/// `out.csv` → `out.plot.csv`.
pub fn plot_path(path: &Path) -> PathBuf {
    path.with_extension("plot.csv")
}

/// Writes the report to `path`, or to stdout when `path` is `None`. CSV
/// output to a file also writes the plot data next to it when there is any.
pub fn emit_report(report: &ExperimentReport, path: Option<&Path>, format: OutputFormat) -> Result<(), HarnessError> {
    let stdout = Path::new("<stdout>");
    match (format, path) {
        (OutputFormat::Json, Some(p)) => std::fs::write(p, to_json(report)?).map_err(|e| io_err(p, e)),
        (OutputFormat::Json, None) => io::stdout()
            .write_all(to_json(report)?.as_bytes())
            .map_err(|e| io_err(stdout, e)),
        (OutputFormat::Csv, Some(p)) => {
            let f = File::create(p).map_err(|e| io_err(p, e))?;
            write_trials_csv(report, f).map_err(|e| csv_err(p, e))?;
            if !report.plot.is_empty() {
                let pp = plot_path(p);
                let f = File::create(&pp).map_err(|e| io_err(&pp, e))?;
                write_plot_csv(report, f).map_err(|e| csv_err(&pp, e))?;
            }
            Ok(())
        }
        (OutputFormat::Csv, None) => write_trials_csv(report, io::stdout().lock()).map_err(|e| csv_err(stdout, e)),
    }
}
