//! Overlap scan: move the second Gaussian source away from the first in
//! momentum and record how the overlap and the interference term shrink.

use multimode_core::dynamics::gaussian_half_widths;
use multimode_core::{make_gaussian, DetectionModel, DistributionKind, SpacetimePoint};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{Result, RunError};
use crate::output::Table;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub separation: f64,
    pub abs_c: f64,
    pub state_norm: f64,
    /// Largest |interference| over the position sweep.
    pub max_abs_interference: f64,
}

/// `0, σ/2, …, 10σ` with σ the width of the first source.
pub fn default_separations(width: f64) -> Vec<f64> {
    (0..=20).map(|i| 0.5 * width * i as f64).collect()
}

fn gaussian_params(kind: &DistributionKind, key: &str) -> Result<(f64, f64, f64)> {
    match kind {
        DistributionKind::Gaussian {
            center,
            width,
            carrier,
        } => Ok((center[0], *width, carrier[0])),
        _ => Err(RunError::validation(
            format!("{key}.kind"),
            "overlap-scan needs Gaussian sources",
        )),
    }
}

/// The first source stays fixed; the second is re-centred at
/// `center_eta + separation` keeping its own width and carrier.
pub fn overlap_scan(cfg: &ExperimentConfig, separations: &[f64]) -> Result<Vec<ScanRow>> {
    if cfg.grid.dimension() != 1 {
        return Err(RunError::validation("grid", "overlap-scan is one-dimensional"));
    }
    let (eta_center, _, _) = gaussian_params(cfg.eta.kind(), "source_eta")?;
    let (_, mu_width, mu_carrier) = gaussian_params(cfg.mu.kind(), "source_mu")?;
    let time = cfg.scan.time;
    let n = cfg.scan.points;

    separations
        .par_iter()
        .map(|&separation| {
            let mu = make_gaussian(
                &cfg.grid,
                &[eta_center + separation],
                mu_width,
                &[mu_carrier],
                &cfg.constants,
            )
            .map_err(|e| {
                RunError::validation("scan.separations", format!("separation {separation}: {e}"))
            })?;
            let model = DetectionModel::new(&cfg.eta, &mu)?;
            let half = gaussian_half_widths(&cfg.eta, time, &cfg.constants)
                .zip(gaussian_half_widths(&mu, time, &cfg.constants))
                .map(|(a, b)| a[0].max(b[0]))
                .expect("both sources are Gaussian");
            let step = 2.0 * half / (n - 1) as f64;
            let mut max_abs_interference: f64 = 0.0;
            for i in 0..n {
                let at = SpacetimePoint::new(&[-half + i as f64 * step], time)?;
                let r = model.at(&at, &cfg.constants)?;
                max_abs_interference = max_abs_interference.max(r.interference.abs());
            }
            let overlap = model.overlap();
            Ok(ScanRow {
                separation,
                abs_c: overlap.c.norm_sqr().sqrt(),
                state_norm: overlap.state_norm,
                max_abs_interference,
            })
        })
        .collect()
}

/// Configured separations, or [`default_separations`] for the first source.
pub fn configured_separations(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    match &cfg.scan.separations {
        Some(list) => Ok(list.clone()),
        None => {
            let (_, width, _) = gaussian_params(cfg.eta.kind(), "source_eta")?;
            Ok(default_separations(width))
        }
    }
}

pub fn scan_table(rows: &[ScanRow]) -> Table {
    Table {
        header: ["separation", "abs_c", "state_norm", "max_abs_interference"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: rows
            .iter()
            .map(|r| vec![r.separation, r.abs_c, r.state_norm, r.max_abs_interference])
            .collect(),
    }
}
