//! CSV emission.
//!
//! Numbers are written with 17 significant digits so they read back as the
//! exact same doubles. Metadata goes in leading `#` lines. Files are written
//! to a temporary sibling and renamed into place, so a failed run never
//! leaves a partial file behind.

use std::io::{self, Write};
use std::path::Path;

use multimode_core::DetectionResult;

use crate::error::{Result, RunError};

const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

/// One evaluation point of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub position: Vec<f64>,
    pub time: f64,
    pub result: DetectionResult,
    /// Brute-force density, when the oracle ran.
    pub oracle_total: Option<f64>,
}

impl ResultRow {
    pub fn abs_deviation(&self) -> Option<f64> {
        self.oracle_total.map(|o| (o - self.result.total).abs())
    }
}

/// Column names and numeric rows ready for [`write_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn result_table(rows: &[ResultRow], dimension: usize) -> Table {
    let with_oracle = rows.iter().any(|r| r.oracle_total.is_some());
    let mut header: Vec<String> = AXIS_NAMES[..dimension].iter().map(|s| s.to_string()).collect();
    header.extend(
        ["t", "total", "term_mu_mu", "term_eta_eta", "interference"]
            .iter()
            .map(|s| s.to_string()),
    );
    if with_oracle {
        header.push("oracle_total".into());
        header.push("abs_deviation".into());
    }
    let rows = rows
        .iter()
        .map(|row| {
            let r = &row.result;
            let mut values = row.position.clone();
            values.extend([row.time, r.total, r.term_mu_mu, r.term_eta_eta, r.interference]);
            if with_oracle {
                values.push(row.oracle_total.unwrap_or(f64::NAN));
                values.push(row.abs_deviation().unwrap_or(f64::NAN));
            }
            values
        })
        .collect();
    Table { header, rows }
}

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_table_to<W: Write>(mut out: W, metadata: &[(&str, String)], table: &Table) -> Result<()> {
    let comment = |e: io::Error| RunError::io("<output>", e);
    for (key, value) in metadata {
        writeln!(out, "# {key}: {value}").map_err(comment)?;
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(&table.header)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(|&x| format_number(x)))?;
    }
    writer.flush().map_err(comment)?;
    Ok(())
}

/// Write to `path` atomically, or to stdout when `path` is `None`.
pub fn write_table(path: Option<&Path>, metadata: &[(&str, String)], table: &Table) -> Result<()> {
    let Some(path) = path else {
        return write_table_to(io::stdout().lock(), metadata, table);
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| RunError::io(dir, e))?;
    write_table_to(io::BufWriter::new(tmp.as_file_mut()), metadata, table)?;
    tmp.as_file().sync_all().map_err(|e| RunError::io(path, e))?;
    tmp.persist(path).map_err(|e| RunError::io(path, e.error))?;
    Ok(())
}
