//! Experiment files.
//!
//! A config is flat TOML with dotted section keys:
//!
//! ```toml
//! constants.hbar = 1.0          # optional, default 1
//! constants.mass = 1.0          # optional, default 1
//!
//! grid.lower = [-10.0]          # one entry per axis
//! grid.upper = [10.0]
//! grid.points = [512]
//!
//! source_eta.kind = "gaussian"
//! source_eta.center = [0.0]
//! source_eta.width = 1.0
//! source_eta.carrier = [0.0]    # optional, default origin
//!
//! source_mu.kind = "discrete"   # or "tabulated" with source_mu.file
//! source_mu.modes = [[3, 1.0, 0.0], [7, 0.0, 1.0]]   # grid index, re, im
//!
//! evaluation.kind = "position_sweep"   # or "point" / "time_sweep"
//! evaluation.lower = [-5.0]
//! evaluation.upper = [5.0]
//! evaluation.points = [101]
//! evaluation.times = [0.0, 1.0]
//!
//! output.path = "out.csv"
//! oracle.enabled = false
//! oracle.max_modes = 16
//! ```
//!
//! Relative file paths are resolved against the directory holding the config.

use std::path::{Path, PathBuf};

use multimode_core::fock::DEFAULT_MAX_MODES;
use multimode_core::{
    make_gaussian, normalize, Axis, Complex64, ModeDistribution, MomentumGrid, PhysicalConstants,
    UniformGrid,
};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Result, RunError};
use crate::tabulated;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    constants: RawConstants,
    grid: RawGrid,
    source_eta: RawSource,
    source_mu: RawSource,
    evaluation: RawEvaluation,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    oracle: RawOracle,
    #[serde(default)]
    scan: RawScan,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default = "one")]
    mass: f64,
}

impl Default for RawConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    dimension: Option<usize>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    points: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawSource {
    Gaussian {
        center: Vec<f64>,
        width: f64,
        carrier: Option<Vec<f64>>,
    },
    Discrete {
        modes: Vec<(usize, f64, f64)>,
        #[serde(default = "yes")]
        normalize: bool,
    },
    Tabulated {
        file: PathBuf,
        #[serde(default = "yes")]
        normalize: bool,
    },
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawEvaluation {
    Point {
        position: Vec<f64>,
        time: f64,
    },
    PositionSweep {
        lower: Vec<f64>,
        upper: Vec<f64>,
        points: Vec<usize>,
        times: Vec<f64>,
    },
    TimeSweep {
        position: Vec<f64>,
        times: Vec<f64>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    #[serde(default)]
    enabled: bool,
    #[serde(default = "default_max_modes")]
    max_modes: usize,
    #[serde(default = "default_samples")]
    samples: usize,
}

impl Default for RawOracle {
    fn default() -> Self {
        Self {
            enabled: false,
            max_modes: DEFAULT_MAX_MODES,
            samples: default_samples(),
        }
    }
}

fn default_max_modes() -> usize {
    DEFAULT_MAX_MODES
}

fn default_samples() -> usize {
    100
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    separations: Option<Vec<f64>>,
    #[serde(default)]
    time: f64,
    points: Option<usize>,
}

/// Where the detection density is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluation {
    Point { position: Vec<f64>, time: f64 },
    /// Every position of `positions` at every time, times outermost.
    PositionSweep { positions: UniformGrid, times: Vec<f64> },
    TimeSweep { position: Vec<f64>, times: Vec<f64> },
}

impl Evaluation {
    pub fn is_sweep(&self) -> bool {
        !matches!(self, Evaluation::Point { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    pub enabled: bool,
    pub max_modes: usize,
    /// Random points drawn by `oracle-check`.
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSettings {
    pub separations: Option<Vec<f64>>,
    pub time: f64,
    pub points: usize,
}

/// A loaded and fully validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub constants: PhysicalConstants,
    pub grid: MomentumGrid,
    pub eta: ModeDistribution,
    pub mu: ModeDistribution,
    pub evaluation: Evaluation,
    pub output: Option<PathBuf>,
    pub oracle: OracleSettings,
    pub scan: ScanSettings,
    /// SHA-256 of the config text, hex encoded.
    pub digest: String,
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, path, base)
}

/// Parse config `text`; `path` is only used in messages.
pub fn parse_config(text: &str, path: &Path, base: &Path) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| RunError::Parse {
        path: path.to_owned(),
        message: e.to_string().trim_end().to_owned(),
    })?;

    let constants = PhysicalConstants::new(raw.constants.hbar, raw.constants.mass)
        .map_err(|e| RunError::validation("constants", e))?;
    let grid = build_grid(&raw.grid)?;
    let eta = build_source(&raw.source_eta, "source_eta", &grid, &constants, base)?;
    let mu = build_source(&raw.source_mu, "source_mu", &grid, &constants, base)?;
    let evaluation = build_evaluation(raw.evaluation, grid.dimension())?;

    if raw.oracle.max_modes == 0 {
        return Err(RunError::validation("oracle.max_modes", "must be at least 1"));
    }
    let scan_points = raw.scan.points.unwrap_or(201);
    if scan_points < 2 {
        return Err(RunError::validation("scan.points", "need at least 2 points"));
    }
    if let Some(separations) = &raw.scan.separations {
        if separations.iter().any(|s| !s.is_finite()) {
            return Err(RunError::validation("scan.separations", "values must be finite"));
        }
    }

    Ok(ExperimentConfig {
        constants,
        grid,
        eta,
        mu,
        evaluation,
        output: raw.output.path.map(|p| resolve(base, &p)),
        oracle: OracleSettings {
            enabled: raw.oracle.enabled,
            max_modes: raw.oracle.max_modes,
            samples: raw.oracle.samples,
        },
        scan: ScanSettings {
            separations: raw.scan.separations,
            time: raw.scan.time,
            points: scan_points,
        },
        digest: hex::encode(Sha256::digest(text.as_bytes())),
    })
}

fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_owned()
    } else {
        base.join(path)
    }
}

fn axes(lower: &[f64], upper: &[f64], points: &[usize], key: &str) -> Result<Vec<Axis>> {
    if lower.len() != upper.len() || lower.len() != points.len() {
        return Err(RunError::validation(
            key,
            "lower, upper and points need one entry per axis",
        ));
    }
    Ok(lower
        .iter()
        .zip(upper)
        .zip(points)
        .map(|((&lo, &hi), &n)| Axis::new(lo, hi, n))
        .collect())
}

fn build_grid(raw: &RawGrid) -> Result<MomentumGrid> {
    let axes = axes(&raw.lower, &raw.upper, &raw.points, "grid")?;
    if let Some(d) = raw.dimension {
        if d != axes.len() {
            return Err(RunError::validation(
                "grid.dimension",
                format!("{d} does not match {} configured axes", axes.len()),
            ));
        }
    }
    UniformGrid::new(&axes).map_err(|e| RunError::validation("grid", e))
}

fn build_source(
    raw: &RawSource,
    key: &str,
    grid: &MomentumGrid,
    constants: &PhysicalConstants,
    base: &Path,
) -> Result<ModeDistribution> {
    use multimode_core::Error as E;
    match raw {
        RawSource::Gaussian {
            center,
            width,
            carrier,
        } => {
            let origin = vec![0.0; grid.dimension()];
            let carrier = carrier.as_deref().unwrap_or(&origin);
            make_gaussian(grid, center, *width, carrier, constants).map_err(|e| {
                let field = match e {
                    E::NonpositiveWidth => "width",
                    E::DimensionMismatch { found, .. } if found != center.len() => "carrier",
                    E::CenterOutsideGrid { .. } | E::GridTooNarrow { .. } | E::DimensionMismatch { .. } => {
                        "center"
                    }
                    _ => "kind",
                };
                RunError::validation(format!("{key}.{field}"), e)
            })
        }
        RawSource::Discrete { modes, normalize: n } => {
            let modes: Vec<(usize, Complex64)> = modes
                .iter()
                .map(|&(i, re, im)| (i, Complex64::new(re, im)))
                .collect();
            let dist = ModeDistribution::discrete(*grid, &modes)
                .map_err(|e| RunError::validation(format!("{key}.modes"), e))?;
            finish(dist, *n, &format!("{key}.modes"))
        }
        RawSource::Tabulated { file, normalize: n } => {
            let file_key = format!("{key}.file");
            let path = resolve(base, file);
            if !path.is_file() {
                return Err(RunError::validation(
                    file_key,
                    format!("{} does not exist", path.display()),
                ));
            }
            let dist = tabulated::read_distribution(&path, *grid, &file_key)?;
            finish(dist, *n, &file_key)
        }
    }
}

fn finish(dist: ModeDistribution, normalize_it: bool, key: &str) -> Result<ModeDistribution> {
    if normalize_it {
        normalize(&dist).map_err(|e| RunError::validation(key, e))
    } else {
        Ok(dist)
    }
}

fn build_evaluation(raw: RawEvaluation, dimension: usize) -> Result<Evaluation> {
    let check_position = |position: &[f64], key: &str| {
        if position.len() != dimension {
            return Err(RunError::validation(
                key,
                format!("expected {dimension} components, found {}", position.len()),
            ));
        }
        if position.iter().any(|x| !x.is_finite()) {
            return Err(RunError::validation(key, "components must be finite"));
        }
        Ok(())
    };
    let check_times = |times: &[f64]| {
        if times.is_empty() {
            return Err(RunError::validation("evaluation.times", "at least one time is required"));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(RunError::validation("evaluation.times", "times must be finite"));
        }
        Ok(())
    };
    match raw {
        RawEvaluation::Point { position, time } => {
            check_position(&position, "evaluation.position")?;
            check_times(&[time]).map_err(|_| RunError::validation("evaluation.time", "must be finite"))?;
            Ok(Evaluation::Point { position, time })
        }
        RawEvaluation::PositionSweep {
            lower,
            upper,
            points,
            times,
        } => {
            let axes = axes(&lower, &upper, &points, "evaluation")?;
            if axes.len() != dimension {
                return Err(RunError::validation(
                    "evaluation.lower",
                    format!("expected {dimension} axes, found {}", axes.len()),
                ));
            }
            check_times(&times)?;
            let positions =
                UniformGrid::new(&axes).map_err(|e| RunError::validation("evaluation", e))?;
            Ok(Evaluation::PositionSweep { positions, times })
        }
        RawEvaluation::TimeSweep { position, times } => {
            check_position(&position, "evaluation.position")?;
            check_times(&times)?;
            Ok(Evaluation::TimeSweep { position, times })
        }
    }
}
