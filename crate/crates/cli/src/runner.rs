//! Evaluation of a loaded experiment.

use multimode_core::dynamics::{check_phase_resolution, gaussian_half_widths};
use multimode_core::{
    DetectionModel, FockOracle, OverlapSet, PhaseWarning, SpacetimePoint,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Evaluation, ExperimentConfig};
use crate::error::{Result, RunError};
use crate::output::ResultRow;

/// Largest accepted |closed form - oracle| per row.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Force the oracle on regardless of the config.
    pub oracle: bool,
    /// Override of `oracle.max_modes`.
    pub max_modes: Option<usize>,
    /// Seed for the random points of `oracle-check`.
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub rows: Vec<ResultRow>,
    pub overlap: OverlapSet,
    /// Points whose phase resolution check failed.
    pub phase_warnings: usize,
    pub worst_phase: Option<PhaseWarning>,
    pub max_deviation: Option<f64>,
}

impl RunReport {
    pub fn oracle_failed(&self) -> bool {
        self.max_deviation.is_some_and(|d| !(d <= ORACLE_TOLERANCE))
    }
}

/// Points of the configured evaluation in emission order.
pub fn evaluation_points(evaluation: &Evaluation) -> Result<Vec<SpacetimePoint>> {
    let points = match evaluation {
        Evaluation::Point { position, time } => vec![SpacetimePoint::new(position, *time)?],
        Evaluation::PositionSweep { positions, times } => {
            let dim = positions.dimension();
            let mut out = Vec::with_capacity(times.len() * positions.len());
            for &t in times {
                for r in positions.points() {
                    out.push(SpacetimePoint::new(&r[..dim], t)?);
                }
            }
            out
        }
        Evaluation::TimeSweep { position, times } => times
            .iter()
            .map(|&t| SpacetimePoint::new(position, t))
            .collect::<std::result::Result<_, _>>()?,
    };
    Ok(points)
}

/// Uniform random points over the region spanned by the evaluation.
///
/// Position ranges narrower than 2 are widened to ±1 around their center; the
/// time range is the span of the configured times.
pub fn sample_points(evaluation: &Evaluation, count: usize, seed: u64) -> Result<Vec<SpacetimePoint>> {
    let points = evaluation_points(evaluation)?;
    let dim = points[0].dimension();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    let (mut t_lo, mut t_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &points {
        for (d, &x) in p.position().iter().enumerate() {
            lo[d] = lo[d].min(x);
            hi[d] = hi[d].max(x);
        }
        t_lo = t_lo.min(p.time());
        t_hi = t_hi.max(p.time());
    }
    for d in 0..dim {
        if hi[d] - lo[d] < 2.0 {
            let mid = 0.5 * (hi[d] + lo[d]);
            lo[d] = mid - 1.0;
            hi[d] = mid + 1.0;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r: Vec<f64> = (0..dim).map(|d| rng.random_range(lo[d]..=hi[d])).collect();
            let t = if t_hi > t_lo { rng.random_range(t_lo..=t_hi) } else { t_lo };
            SpacetimePoint::new(&r, t).map_err(RunError::from)
        })
        .collect()
}

/// Evaluate the configured points.
pub fn run(cfg: &ExperimentConfig, options: &RunOptions) -> Result<RunReport> {
    let points = evaluation_points(&cfg.evaluation)?;
    evaluate(cfg, &points, cfg.oracle.enabled || options.oracle, options)
}

/// Compare closed form and oracle at `oracle.samples` random points.
pub fn oracle_check(cfg: &ExperimentConfig, options: &RunOptions) -> Result<RunReport> {
    if cfg.oracle.samples == 0 {
        return Err(RunError::validation("oracle.samples", "must be at least 1"));
    }
    let points = sample_points(&cfg.evaluation, cfg.oracle.samples, options.seed)?;
    evaluate(cfg, &points, true, options)
}

fn evaluate(
    cfg: &ExperimentConfig,
    points: &[SpacetimePoint],
    with_oracle: bool,
    options: &RunOptions,
) -> Result<RunReport> {
    let model = DetectionModel::new(&cfg.eta, &cfg.mu)?;
    let oracle = if with_oracle {
        let cap = options.max_modes.unwrap_or(cfg.oracle.max_modes);
        Some(FockOracle::from_distributions(&cfg.eta, &cfg.mu, &cfg.constants, cap).map_err(
            |e| match e {
                multimode_core::Error::TooManyModes { .. } => RunError::validation(
                    "oracle.max_modes",
                    format!("{e}; raise it with --max-modes"),
                ),
                other => other.into(),
            },
        )?)
    } else {
        None
    };

    let rows = points
        .par_iter()
        .map(|at| {
            let result = model.at(at, &cfg.constants)?;
            let oracle_total = oracle.as_ref().map(|o| o.density(at)).transpose()?;
            Ok(ResultRow {
                position: at.position().to_vec(),
                time: at.time(),
                result,
                oracle_total,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let warnings: Vec<PhaseWarning> = points
        .iter()
        .filter_map(|at| check_phase_resolution(&cfg.grid, at, &cfg.constants))
        .collect();
    let worst_phase = warnings
        .iter()
        .copied()
        .max_by(|a, b| a.phase_step.total_cmp(&b.phase_step));

    let max_deviation = oracle.as_ref().map(|_| {
        rows.iter()
            .filter_map(ResultRow::abs_deviation)
            .fold(0.0, |m: f64, d| if d.is_nan() { f64::NAN } else { m.max(d) })
    });

    Ok(RunReport {
        rows,
        overlap: *model.overlap(),
        phase_warnings: warnings.len(),
        worst_phase,
        max_deviation,
    })
}

/// Position box holding both Gaussian sources at `time`, per axis half-width.
pub fn enclosing_half_widths(cfg: &ExperimentConfig, time: f64) -> Option<[f64; 3]> {
    let a = gaussian_half_widths(&cfg.eta, time, &cfg.constants)?;
    let b = gaussian_half_widths(&cfg.mu, time, &cfg.constants)?;
    Some([a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])])
}
