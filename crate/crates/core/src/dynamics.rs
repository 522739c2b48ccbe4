//! Free evolution of plane-wave superpositions.
//!
//! A mode distribution `f` on the grid defines the single-particle amplitude
//!
//! ```text
//! ψ_f(r, t) = (2πħ)^(-d/2) Σ_k w · exp(i(p_k·r - E(p_k) t)/ħ) · f_k
//! ```
//!
//! with `E(p) = p²/2m` and `w` the grid cell volume. The cross function of two
//! distributions is the double sum over `p` and `q`; it separates exactly into
//! `conj(ψ_a) · ψ_b`, which is how it is evaluated here.

use core::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::modes::{DistributionKind, ModeDistribution, MomentumGrid, PhysicalConstants};

/// Position `r` and time `t` at which the field is probed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    position: [f64; 3],
    dimension: usize,
    time: f64,
}

impl SpacetimePoint {
    pub fn new(position: &[f64], time: f64) -> Result<Self> {
        if position.is_empty() || position.len() > 3 {
            return Err(Error::InvalidGrid("dimension must be 1, 2 or 3"));
        }
        let mut stored = [0.0; 3];
        stored[..position.len()].copy_from_slice(position);
        Ok(Self {
            position: stored,
            dimension: position.len(),
            time,
        })
    }

    pub fn position(&self) -> &[f64] {
        &self.position[..self.dimension]
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub(crate) fn padded(&self) -> &[f64; 3] {
        &self.position
    }
}

/// Value of a cross function `P_ab(r, t)`; units of inverse volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossAmplitude(pub Complex64);

impl CrossAmplitude {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }
}

/// Kinetic energy `|p|² / 2m`.
pub fn dispersion(momentum: &[f64], constants: &PhysicalConstants) -> f64 {
    momentum.iter().map(|p| p * p).sum::<f64>() / (2.0 * constants.mass())
}

/// Single-particle amplitude `ψ_f(r, t)` of a freely evolving distribution.
pub fn propagate(
    dist: &ModeDistribution,
    at: &SpacetimePoint,
    constants: &PhysicalConstants,
) -> Result<Complex64> {
    let grid = dist.grid();
    check_dimension(grid, at)?;
    let hbar = constants.hbar();
    let r = at.padded();
    let t = at.time();
    let sum: Complex64 = grid
        .points()
        .zip(dist.amplitudes())
        .filter(|(_, f)| f.re != 0.0 || f.im != 0.0)
        .map(|(p, f)| {
            let phase = (math::dot(&p, r) - dispersion(&p, constants) * t) / hbar;
            math::cis(phase) * f
        })
        .sum();
    let prefactor = libm::pow(2.0 * PI * hbar, -0.5 * grid.dimension() as f64) * grid.weight();
    Ok(sum * prefactor)
}

/// `P_ab(r, t) = conj(ψ_a(r, t)) · ψ_b(r, t)`.
pub fn cross_amplitude(
    a: &ModeDistribution,
    b: &ModeDistribution,
    at: &SpacetimePoint,
    constants: &PhysicalConstants,
) -> Result<CrossAmplitude> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let psi_a = propagate(a, at, constants)?;
    let psi_b = propagate(b, at, constants)?;
    Ok(CrossAmplitude(psi_a.conj() * psi_b))
}

/// Raised when the integrand phase changes by more than π/4 between
/// neighbouring grid points somewhere on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseWarning {
    pub axis: usize,
    /// Largest phase increment per cell on that axis, in radians.
    pub phase_step: f64,
}

pub const PHASE_STEP_LIMIT: f64 = FRAC_PI_4;

/// Per-axis bound on the phase increment of `exp(i(p·r - E t)/ħ)` between
/// adjacent grid points: `Δp (|r| + |p_max| |t| / m) / ħ`.
pub fn phase_steps(
    grid: &MomentumGrid,
    at: &SpacetimePoint,
    constants: &PhysicalConstants,
) -> [f64; 3] {
    let p_max = grid.max_abs();
    let mut out = [0.0; 3];
    for (axis_index, axis) in grid.axes().iter().enumerate() {
        let r = at.padded()[axis_index].abs();
        let velocity = p_max[axis_index] / constants.mass();
        out[axis_index] = axis.spacing() * (r + velocity * at.time().abs()) / constants.hbar();
    }
    out
}

pub fn check_phase_resolution(
    grid: &MomentumGrid,
    at: &SpacetimePoint,
    constants: &PhysicalConstants,
) -> Option<PhaseWarning> {
    phase_steps(grid, at, constants)
        .iter()
        .take(grid.dimension())
        .enumerate()
        .filter(|(_, &step)| step > PHASE_STEP_LIMIT)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(axis, &phase_step)| PhaseWarning { axis, phase_step })
}

/// Half-widths of a position box centred on the origin that holds a freely
/// spreading Gaussian packet to beyond five standard deviations at time `t`:
/// `|x0| + 5σ_x + |p0| t / m + 5 σ t / m` with `σ_x = ħ / 2σ`.
///
/// `None` for distributions that are not Gaussian.
pub fn gaussian_half_widths(
    dist: &ModeDistribution,
    time: f64,
    constants: &PhysicalConstants,
) -> Option<[f64; 3]> {
    let DistributionKind::Gaussian {
        center,
        width,
        carrier,
    } = dist.kind()
    else {
        return None;
    };
    let t = time.abs();
    let m = constants.mass();
    let sigma_x = constants.hbar() / (2.0 * width);
    let mut out = [0.0; 3];
    for (d, slot) in out.iter_mut().enumerate().take(dist.grid().dimension()) {
        *slot = carrier[d].abs() + 5.0 * sigma_x + center[d].abs() / m * t + 5.0 * width / m * t;
    }
    Some(out)
}

fn check_dimension(grid: &MomentumGrid, at: &SpacetimePoint) -> Result<()> {
    if grid.dimension() != at.dimension() {
        return Err(Error::DimensionMismatch {
            expected: grid.dimension(),
            found: at.dimension(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{inner_product, make_gaussian, normalize, UniformGrid};
    use alloc::vec::Vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    /// Unfactored double sum over p and q.
    fn cross_amplitude_double_sum(
        a: &ModeDistribution,
        b: &ModeDistribution,
        at: &SpacetimePoint,
        constants: &PhysicalConstants,
    ) -> Complex64 {
        let grid = a.grid();
        let hbar = constants.hbar();
        let w = grid.weight();
        let r = at.position();
        let t = at.time();
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, p) in grid.points().enumerate() {
            for (j, q) in grid.points().enumerate() {
                let dr: f64 = (0..r.len()).map(|d| (q[d] - p[d]) * r[d]).sum();
                let de = dispersion(&q, constants) - dispersion(&p, constants);
                let phase = (dr - de * t) / hbar;
                sum += Complex64::from_polar(1.0, phase)
                    * a.amplitudes()[i].conj()
                    * b.amplitudes()[j]
                    * (w * w);
            }
        }
        sum / (2.0 * PI * hbar).powi(grid.dimension() as i32)
    }

    fn random_discrete(rng: &mut ChaCha8Rng, grid: UniformGrid, modes: usize) -> ModeDistribution {
        let mut picked: Vec<(usize, Complex64)> = Vec::new();
        while picked.len() < modes {
            let index = rng.random_range(0..grid.len());
            if picked.iter().all(|(i, _)| *i != index) {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                picked.push((index, z));
            }
        }
        normalize(&ModeDistribution::discrete(grid, &picked).unwrap()).unwrap()
    }

    #[test]
    fn dispersion_values() {
        let unit = unit();
        assert_eq!(dispersion(&[0.0], &unit), 0.0);
        assert_eq!(dispersion(&[2.0], &unit), 2.0);
        let heavy = PhysicalConstants::new(1.0, 2.0).unwrap();
        assert_eq!(dispersion(&[1.0, 1.0, 1.0], &heavy), 0.75);
    }

    #[test]
    fn gaussian_peak_value_at_origin() {
        let grid = UniformGrid::line(-10.0, 10.0, 512).unwrap();
        let g = make_gaussian(&grid, &[0.0], 1.0, &[0.0], &unit()).unwrap();
        let at = SpacetimePoint::new(&[0.0], 0.0).unwrap();
        let psi = propagate(&g, &at, &unit()).unwrap();
        let expected = (2.0 / PI).powf(0.25);
        assert!((psi.re - expected).abs() < 1e-8, "{psi} vs {expected}");
        assert!(psi.im.abs() < 1e-12);
    }

    #[test]
    fn carrier_sets_position_peak() {
        let grid = UniformGrid::line(-10.0, 10.0, 512).unwrap();
        let g = make_gaussian(&grid, &[0.0], 1.0, &[3.0], &unit()).unwrap();
        let dx = 0.01;
        let (best, _) = (0..1001)
            .map(|i| -2.0 + i as f64 * dx)
            .map(|x| {
                let at = SpacetimePoint::new(&[x], 0.0).unwrap();
                (x, propagate(&g, &at, &unit()).unwrap().norm_sqr())
            })
            .fold((0.0, -1.0), |acc, (x, v)| if v > acc.1 { (x, v) } else { acc });
        assert!((best - 3.0).abs() <= dx, "peak at {best}");
    }

    #[test]
    fn unitarity_at_zero_time() {
        let grid = UniformGrid::line(-8.0, 8.0, 256).unwrap();
        let g = make_gaussian(&grid, &[1.0], 1.0, &[-1.0], &unit()).unwrap();
        let dx = 0.02;
        let total: f64 = (0..=800)
            .map(|i| -9.0 + i as f64 * dx)
            .map(|x| {
                let at = SpacetimePoint::new(&[x], 0.0).unwrap();
                propagate(&g, &at, &unit()).unwrap().norm_sqr()
            })
            .sum::<f64>()
            * dx;
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn factorization_matches_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = UniformGrid::line(-3.0, 3.0, 13).unwrap();
        let constants = PhysicalConstants::new(0.7, 1.3).unwrap();
        for _ in 0..10 {
            let a = random_discrete(&mut rng, grid, 4);
            let b = random_discrete(&mut rng, grid, 4);
            let at = SpacetimePoint::new(&[rng.random_range(-4.0..4.0)], rng.random_range(-2.0..2.0))
                .unwrap();
            let fast = cross_amplitude(&a, &b, &at, &constants).unwrap().value();
            let slow = cross_amplitude_double_sum(&a, &b, &at, &constants);
            assert!((fast - slow).norm() < 1e-12, "{fast} vs {slow}");
        }
    }

    #[test]
    fn factorization_in_two_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let grid = UniformGrid::cube(2, -2.0, 2.0, 5).unwrap();
        let a = random_discrete(&mut rng, grid, 4);
        let b = random_discrete(&mut rng, grid, 4);
        let at = SpacetimePoint::new(&[0.4, -1.1], 0.8).unwrap();
        let fast = cross_amplitude(&a, &b, &at, &unit()).unwrap().value();
        let slow = cross_amplitude_double_sum(&a, &b, &at, &unit());
        assert!((fast - slow).norm() < 1e-12);
    }

    #[test]
    fn diagonal_is_density_and_conjugation_holds() {
        let grid = UniformGrid::line(-10.0, 10.0, 256).unwrap();
        let eta = make_gaussian(&grid, &[0.0], 1.0, &[0.0], &unit()).unwrap();
        let mu = make_gaussian(&grid, &[1.0], 0.8, &[1.5], &unit()).unwrap();
        for (x, t) in [(0.0, 0.0), (1.3, 0.5), (-2.0, 2.0)] {
            let at = SpacetimePoint::new(&[x], t).unwrap();
            let ee = cross_amplitude(&eta, &eta, &at, &unit()).unwrap().value();
            let psi = propagate(&eta, &at, &unit()).unwrap();
            assert!(ee.im.abs() < 1e-14 && ee.re >= 0.0);
            assert!((ee.re - psi.norm_sqr()).abs() < 1e-15);
            let em = cross_amplitude(&eta, &mu, &at, &unit()).unwrap();
            let me = cross_amplitude(&mu, &eta, &at, &unit()).unwrap();
            assert!((em.value() - me.conj().value()).norm() < 1e-14);
        }
    }

    #[test]
    fn position_integral_of_cross_function_is_overlap() {
        let grid = UniformGrid::line(-10.0, 10.0, 400).unwrap();
        let eta = make_gaussian(&grid, &[0.0], 1.0, &[0.0], &unit()).unwrap();
        let mu = make_gaussian(&grid, &[0.8], 1.0, &[0.5], &unit()).unwrap();
        let overlap = inner_product(&eta, &mu).unwrap();
        for t in [0.0, 1.0, 5.0] {
            let half = gaussian_half_widths(&eta, t, &unit())
                .unwrap()
                .iter()
                .zip(gaussian_half_widths(&mu, t, &unit()).unwrap())
                .map(|(a, b)| a.max(b))
                .next()
                .unwrap();
            let n = 4001;
            let dx = 2.0 * half / (n - 1) as f64;
            let integral: Complex64 = (0..n)
                .map(|i| {
                    let at = SpacetimePoint::new(&[-half + i as f64 * dx], t).unwrap();
                    cross_amplitude(&eta, &mu, &at, &unit()).unwrap().value()
                })
                .sum::<Complex64>()
                * dx;
            assert!((integral - overlap).norm() < 1e-6, "t={t}: {integral} vs {overlap}");
        }
    }

    #[test]
    fn errors() {
        let g1 = UniformGrid::line(-1.0, 1.0, 4).unwrap();
        let g2 = UniformGrid::line(-1.0, 1.0, 6).unwrap();
        let a = ModeDistribution::discrete(g1, &[(0, Complex64::new(1.0, 0.0))]).unwrap();
        let b = ModeDistribution::discrete(g2, &[(0, Complex64::new(1.0, 0.0))]).unwrap();
        let at = SpacetimePoint::new(&[0.0], 0.0).unwrap();
        assert_eq!(cross_amplitude(&a, &b, &at, &unit()), Err(Error::GridMismatch));
        let at2 = SpacetimePoint::new(&[0.0, 0.0], 0.0).unwrap();
        assert!(matches!(
            propagate(&a, &at2, &unit()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(SpacetimePoint::new(&[], 0.0).is_err());
    }

    #[test]
    fn phase_warning_thresholds() {
        let grid = UniformGrid::line(-10.0, 10.0, 512).unwrap();
        let near = SpacetimePoint::new(&[1.0], 0.1).unwrap();
        assert_eq!(check_phase_resolution(&grid, &near, &unit()), None);
        let far = SpacetimePoint::new(&[100.0], 0.0).unwrap();
        let warning = check_phase_resolution(&grid, &far, &unit()).unwrap();
        assert_eq!(warning.axis, 0);
        assert!((warning.phase_step - 100.0 * 20.0 / 511.0).abs() < 1e-12);
    }
}
