//! Momentum grids and complex mode distributions.
//!
//! A distribution is sampled on a uniform grid whose points double as the
//! discrete plane-wave modes of the Fock-space evaluator. Integrals over
//! momentum are rectangle sums with the constant cell weight
//! `Π_axis Δp_axis`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

pub const MAX_DIMENSION: usize = 3;

/// Reduced Planck constant and particle mass. Natural units by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    mass: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        let valid = |x: f64| x.is_finite() && x > 0.0;
        if !valid(hbar) || !valid(mass) {
            return Err(Error::InvalidConstants);
        }
        Ok(Self { hbar, mass })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

/// One axis of a uniform grid: `count` points from `lower` to `upper`
/// inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(lower: f64, upper: f64, count: usize) -> Self {
        Self { lower, upper, count }
    }

    pub fn spacing(&self) -> f64 {
        (self.upper - self.lower) / (self.count - 1) as f64
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        self.lower + i as f64 * self.spacing()
    }

    /// Index of the point within `1e-9` spacings of `x`, if any.
    pub fn locate(&self, x: f64) -> Option<usize> {
        let step = self.spacing();
        let fractional = (x - self.lower) / step;
        let nearest = math::round(fractional);
        if nearest < 0.0 || nearest > (self.count - 1) as f64 {
            return None;
        }
        if (fractional - nearest).abs() > 1e-9 {
            return None;
        }
        Some(nearest as usize)
    }

    fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidGrid("each axis needs at least 2 points"));
        }
        if !(self.lower.is_finite() && self.upper.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite"));
        }
        if self.upper <= self.lower {
            return Err(Error::InvalidGrid("upper bound must exceed lower bound"));
        }
        Ok(())
    }
}

const UNUSED_AXIS: Axis = Axis {
    lower: 0.0,
    upper: 0.0,
    count: 1,
};

/// Uniform tensor-product grid in 1 to 3 dimensions.
///
/// Points are stored row-major: the last axis varies fastest. Unused trailing
/// coordinates of a point are zero, so `[f64; 3]` works for every dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    dimension: usize,
    axes: [Axis; MAX_DIMENSION],
}

/// Grid over momentum space.
pub type MomentumGrid = UniformGrid;

impl UniformGrid {
    pub fn new(axes: &[Axis]) -> Result<Self> {
        if axes.is_empty() || axes.len() > MAX_DIMENSION {
            return Err(Error::InvalidGrid("dimension must be 1, 2 or 3"));
        }
        let mut stored = [UNUSED_AXIS; MAX_DIMENSION];
        for (slot, axis) in stored.iter_mut().zip(axes) {
            axis.validate()?;
            *slot = *axis;
        }
        Ok(Self {
            dimension: axes.len(),
            axes: stored,
        })
    }

    pub fn line(lower: f64, upper: f64, count: usize) -> Result<Self> {
        Self::new(&[Axis::new(lower, upper, count)])
    }

    /// Same axis repeated `dimension` times.
    pub fn cube(dimension: usize, lower: f64, upper: f64, count: usize) -> Result<Self> {
        if !(1..=MAX_DIMENSION).contains(&dimension) {
            return Err(Error::InvalidGrid("dimension must be 1, 2 or 3"));
        }
        Self::new(&[Axis::new(lower, upper, count); MAX_DIMENSION][..dimension])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes[..self.dimension]
    }

    pub fn len(&self) -> usize {
        self.axes().iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight of every point (cell volume).
    pub fn weight(&self) -> f64 {
        self.axes().iter().map(Axis::spacing).product()
    }

    pub fn point(&self, index: usize) -> [f64; 3] {
        let mut out = [0.0; 3];
        let mut rest = index;
        for d in (0..self.dimension).rev() {
            let axis = &self.axes[d];
            out[d] = axis.coordinate(rest % axis.count);
            rest /= axis.count;
        }
        out
    }

    pub fn points(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Flat index of the grid point at `coords`, tolerating decimal round-off.
    pub fn locate(&self, coords: &[f64]) -> Option<usize> {
        if coords.len() != self.dimension {
            return None;
        }
        let mut index = 0;
        for (axis, &x) in self.axes().iter().zip(coords) {
            index = index * axis.count + axis.locate(x)?;
        }
        Some(index)
    }

    /// Largest |coordinate| on each axis.
    pub fn max_abs(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (slot, axis) in out.iter_mut().zip(self.axes()) {
            *slot = axis.lower.abs().max(axis.upper.abs());
        }
        out
    }

    pub(crate) fn expect_dimension(&self, found: usize) -> Result<()> {
        if found != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found,
            });
        }
        Ok(())
    }
}

/// How a distribution was constructed.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    Gaussian {
        center: [f64; 3],
        width: f64,
        carrier: [f64; 3],
    },
    /// Nonzero only on the listed flat grid indices.
    DiscreteModes(Vec<(usize, Complex64)>),
    Tabulated,
}

/// Complex momentum amplitudes sampled on a [`MomentumGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDistribution {
    grid: MomentumGrid,
    amplitudes: Vec<Complex64>,
    kind: DistributionKind,
}

impl ModeDistribution {
    /// Raw amplitudes, one per grid point, in grid order.
    pub fn tabulated(grid: MomentumGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            grid,
            amplitudes,
            kind: DistributionKind::Tabulated,
        })
    }

    /// Records of (momentum, amplitude) that must each land on a grid point.
    /// Grid points without a record are zero.
    pub fn from_records<'a, I>(grid: MomentumGrid, records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [f64], Complex64)>,
    {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut seen = vec![false; grid.len()];
        for (record, (momentum, value)) in records.into_iter().enumerate() {
            grid.expect_dimension(momentum.len())?;
            let index = grid.locate(momentum).ok_or(Error::OffGrid { record })?;
            if seen[index] {
                return Err(Error::DuplicateMode { index });
            }
            seen[index] = true;
            amplitudes[index] = value;
        }
        Self::tabulated(grid, amplitudes)
    }

    /// Amplitudes on a few grid points, zero elsewhere.
    pub fn discrete(grid: MomentumGrid, modes: &[(usize, Complex64)]) -> Result<Self> {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut seen = vec![false; grid.len()];
        for &(index, value) in modes {
            if index >= grid.len() {
                return Err(Error::IndexOutOfRange {
                    index,
                    len: grid.len(),
                });
            }
            if seen[index] {
                return Err(Error::DuplicateMode { index });
            }
            seen[index] = true;
            amplitudes[index] = value;
        }
        Ok(Self {
            grid,
            amplitudes,
            kind: DistributionKind::DiscreteModes(modes.to_vec()),
        })
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    /// `Σ |f_k|² w`, the discrete form of `∫ |f(p)|² dp`.
    pub fn squared_norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.weight()
    }

    /// Flat indices of nonzero amplitudes.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(i, _)| i)
    }

    /// Same distribution multiplied by `exp(iθ)`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = math::cis(theta);
        let mut out = self.map(|a| a * phase);
        if let DistributionKind::DiscreteModes(modes) = &mut out.kind {
            modes.iter_mut().for_each(|(_, a)| *a *= phase);
        }
        out
    }

    pub(crate) fn check_normalized(&self, tolerance: f64) -> Result<()> {
        let squared_norm = self.squared_norm();
        if (squared_norm - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized { squared_norm });
        }
        Ok(())
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            amplitudes: self.amplitudes.iter().map(|&a| f(a)).collect(),
            kind: self.kind.clone(),
        }
    }
}

/// Normalized Gaussian `∝ exp(-(p-p0)²/(4σ²)) · exp(-i p·x0/ħ)`.
///
/// `width` is the momentum standard deviation σ of `|f|²`; `carrier` is the
/// position-space center x0 of the packet at t = 0.
pub fn make_gaussian(
    grid: &MomentumGrid,
    center: &[f64],
    width: f64,
    carrier: &[f64],
    constants: &PhysicalConstants,
) -> Result<ModeDistribution> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::NonpositiveWidth);
    }
    grid.expect_dimension(center.len())?;
    grid.expect_dimension(carrier.len())?;
    for (axis_index, (axis, &c)) in grid.axes().iter().zip(center).enumerate() {
        if c < axis.lower || c > axis.upper {
            return Err(Error::CenterOutsideGrid { axis: axis_index });
        }
        if c - 5.0 * width < axis.lower || c + 5.0 * width > axis.upper {
            return Err(Error::GridTooNarrow { axis: axis_index });
        }
    }

    let mut p0 = [0.0; 3];
    p0[..center.len()].copy_from_slice(center);
    let mut x0 = [0.0; 3];
    x0[..carrier.len()].copy_from_slice(carrier);

    let prefactor = libm::pow(2.0 * PI * width * width, -0.25 * grid.dimension() as f64);
    let amplitudes = grid
        .points()
        .map(|p| {
            let offset = [p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]];
            let envelope = math::exp(-math::dot(&offset, &offset) / (4.0 * width * width));
            math::cis(-math::dot(&p, &x0) / constants.hbar()) * (prefactor * envelope)
        })
        .collect();

    normalize(&ModeDistribution {
        grid: *grid,
        amplitudes,
        kind: DistributionKind::Gaussian {
            center: p0,
            width,
            carrier: x0,
        },
    })
}

/// Rescale by one positive real factor so that the squared norm is 1.
pub fn normalize(dist: &ModeDistribution) -> Result<ModeDistribution> {
    let squared_norm = dist.squared_norm();
    if squared_norm == 0.0 {
        return Err(Error::ZeroDistribution);
    }
    let scale = 1.0 / math::sqrt(squared_norm);
    let mut out = dist.map(|a| a * scale);
    if let DistributionKind::DiscreteModes(modes) = &mut out.kind {
        modes.iter_mut().for_each(|(_, a)| *a *= scale);
    }
    Ok(out)
}

/// `∫ a*(p) b(p) dp` by the grid rule.
pub fn inner_product(a: &ModeDistribution, b: &ModeDistribution) -> Result<Complex64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let sum: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * a.grid.weight())
}
