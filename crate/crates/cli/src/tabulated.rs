//! Plain-text mode distributions.
//!
//! One record per line: the momentum components followed by the real and
//! imaginary parts of the amplitude, separated by whitespace. Lines starting
//! with `#` and blank lines are ignored. Every momentum must coincide with a
//! grid point; nothing is interpolated.

use std::io::Write;
use std::path::Path;

use multimode_core::{Complex64, Error as CoreError, ModeDistribution, MomentumGrid};

use crate::error::{Result, RunError};

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    /// 1-based line number in the source text.
    pub line: usize,
    pub momentum: Vec<f64>,
    pub amplitude: Complex64,
}

pub fn parse_records(text: &str, dimension: usize, path: &Path) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let line = number + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != dimension + 2 {
            return Err(RunError::Parse {
                path: path.to_owned(),
                message: format!(
                    "line {line}: expected {} fields, found {}",
                    dimension + 2,
                    fields.len()
                ),
            });
        }
        let values = fields
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| RunError::Parse {
                path: path.to_owned(),
                message: format!("line {line}: {e}"),
            })?;
        records.push(Record {
            line,
            momentum: values[..dimension].to_vec(),
            amplitude: Complex64::new(values[dimension], values[dimension + 1]),
        });
    }
    Ok(records)
}

/// Place records on the grid. `key` names the configuration entry in errors.
pub fn distribution_from_records(
    grid: MomentumGrid,
    records: &[Record],
    key: &str,
) -> Result<ModeDistribution> {
    let pairs = records.iter().map(|r| (r.momentum.as_slice(), r.amplitude));
    ModeDistribution::from_records(grid, pairs).map_err(|e| match e {
        CoreError::OffGrid { record } => RunError::validation(
            key,
            format!("line {}: momentum not on grid", records[record].line),
        ),
        CoreError::DuplicateMode { index } => {
            RunError::validation(key, format!("grid point {index} listed twice"))
        }
        other => RunError::validation(key, other),
    })
}

pub fn read_distribution(path: &Path, grid: MomentumGrid, key: &str) -> Result<ModeDistribution> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    let records = parse_records(&text, grid.dimension(), path)?;
    distribution_from_records(grid, &records, key)
}

/// Write the nonzero amplitudes of `dist`, full precision.
pub fn write_distribution<W: Write>(dist: &ModeDistribution, mut out: W) -> std::io::Result<()> {
    let grid = dist.grid();
    writeln!(out, "# momentum[{}] re im", grid.dimension())?;
    for index in dist.support() {
        let p = grid.point(index);
        for x in &p[..grid.dimension()] {
            write!(out, "{x:.17e} ")?;
        }
        let a = dist.amplitudes()[index];
        writeln!(out, "{:.17e} {:.17e}", a.re, a.im)?;
    }
    Ok(())
}
