//! Brute-force evaluation of the single-detection density in the
//! occupation-number basis of a finite set of plane-wave modes.
//!
//! Nothing here uses the closed-form overlap algebra of
//! [`interference`](crate::interference): the two-particle state is built by
//! applying creation operators to the vacuum and the density is the
//! expectation of `ψ⁺ψ` assembled from annihilation operators. Agreement
//! between the two routes is the main correctness check of the crate.
//!
//! Continuum to discrete dictionary on a grid with cell volume `w`:
//! `a(p) → a_k / √w`, `δ(p - q) → δ_kl / w`, `∫ dp → Σ_k w`. Amplitudes fed
//! to [`build_state`] are therefore `f_k √w`, normalized so that
//! `Σ_k |f_k √w|² = 1`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::{dispersion, SpacetimePoint};
use crate::error::{Error, Result};
use crate::math;
use crate::modes::{ModeDistribution, PhysicalConstants};

/// Default cap on the number of oracle modes.
pub const DEFAULT_MAX_MODES: usize = 16;

/// Occupation number of every mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupation(Vec<u8>);

impl Occupation {
    pub fn new(counts: Vec<u8>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }
}

/// Finite set of distinct plane-wave modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteModeSet {
    momenta: Vec<[f64; 3]>,
    dimension: usize,
    constants: PhysicalConstants,
}

impl DiscreteModeSet {
    pub fn new(
        momenta: Vec<[f64; 3]>,
        dimension: usize,
        constants: PhysicalConstants,
    ) -> Result<Self> {
        if momenta.is_empty() {
            return Err(Error::EmptyModeSet);
        }
        if !(1..=3).contains(&dimension) {
            return Err(Error::InvalidGrid("dimension must be 1, 2 or 3"));
        }
        for (k, p) in momenta.iter().enumerate() {
            if momenta[..k].contains(p) {
                return Err(Error::DuplicateMode { index: k });
            }
        }
        Ok(Self {
            momenta,
            dimension,
            constants,
        })
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    pub fn momentum(&self, k: usize) -> &[f64; 3] {
        &self.momenta[k]
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }
}

/// Oracle inputs for a pair of distributions on a shared grid.
///
/// Modes are the grid points where either distribution is nonzero; leaving
/// out points where both vanish does not change the state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedPair {
    pub modes: DiscreteModeSet,
    pub eta: Vec<Complex64>,
    pub mu: Vec<Complex64>,
    /// Grid cell volume.
    pub volume_weight: f64,
}

pub fn discretize_pair(
    eta: &ModeDistribution,
    mu: &ModeDistribution,
    constants: &PhysicalConstants,
    max_modes: usize,
) -> Result<DiscretizedPair> {
    let grid = eta.grid();
    if grid != mu.grid() {
        return Err(Error::GridMismatch);
    }
    let zero = Complex64::new(0.0, 0.0);
    let support: Vec<usize> = (0..grid.len())
        .filter(|&i| eta.amplitudes()[i] != zero || mu.amplitudes()[i] != zero)
        .collect();
    if support.len() > max_modes {
        return Err(Error::TooManyModes {
            count: support.len(),
            cap: max_modes,
        });
    }
    let root_w = math::sqrt(grid.weight());
    let modes = DiscreteModeSet::new(
        support.iter().map(|&i| grid.point(i)).collect(),
        grid.dimension(),
        *constants,
    )?;
    Ok(DiscretizedPair {
        modes,
        eta: support.iter().map(|&i| eta.amplitudes()[i] * root_w).collect(),
        mu: support.iter().map(|&i| mu.amplitudes()[i] * root_w).collect(),
        volume_weight: grid.weight(),
    })
}

/// Sparse vector in a fixed-particle-number sector of Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    modes: usize,
    particles: usize,
    amplitudes: BTreeMap<Occupation, Complex64>,
}

impl FockState {
    pub fn vacuum(modes: usize) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(Occupation(vec![0; modes]), Complex64::new(1.0, 0.0));
        Self {
            modes,
            particles: 0,
            amplitudes,
        }
    }

    /// Zero vector in the given sector.
    pub fn zero(modes: usize, particles: usize) -> Self {
        Self {
            modes,
            particles,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    /// Number of stored basis states.
    pub fn basis_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, occupation: &Occupation) -> Complex64 {
        self.amplitudes
            .get(occupation)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amplitudes.iter()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &FockState) -> Complex64 {
        if self.particles != other.particles {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes
            .iter()
            .filter_map(|(occ, a)| other.amplitudes.get(occ).map(|b| a.conj() * b))
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// `self += factor · other`; both must be in the same sector.
    pub fn add_scaled(&mut self, factor: Complex64, other: &FockState) {
        debug_assert_eq!(self.modes, other.modes);
        debug_assert_eq!(self.particles, other.particles);
        for (occ, a) in &other.amplitudes {
            *self
                .amplitudes
                .entry(occ.clone())
                .or_insert(Complex64::new(0.0, 0.0)) += factor * a;
        }
    }

    /// `â_k`: `|n_k⟩ → √n_k |n_k - 1⟩`, so empty modes give zero.
    pub fn apply_annihilation(&self, mode: usize) -> Result<FockState> {
        self.check_mode(mode)?;
        if self.particles == 0 {
            return Ok(Self::zero(self.modes, 0));
        }
        let mut out = Self::zero(self.modes, self.particles - 1);
        for (occ, a) in &self.amplitudes {
            let n = occ.0[mode];
            if n == 0 {
                continue;
            }
            let mut lowered = occ.clone();
            lowered.0[mode] -= 1;
            *out.amplitudes
                .entry(lowered)
                .or_insert(Complex64::new(0.0, 0.0)) += a * math::sqrt(n as f64);
        }
        Ok(out)
    }

    /// `â⁺_k`: `|n_k⟩ → √(n_k + 1) |n_k + 1⟩`.
    pub fn apply_creation(&self, mode: usize) -> Result<FockState> {
        self.check_mode(mode)?;
        let mut out = Self::zero(self.modes, self.particles + 1);
        for (occ, a) in &self.amplitudes {
            let n = occ.0[mode];
            let mut raised = occ.clone();
            raised.0[mode] = n.checked_add(1).expect("occupation overflow");
            *out.amplitudes
                .entry(raised)
                .or_insert(Complex64::new(0.0, 0.0)) += a * math::sqrt(n as f64 + 1.0);
        }
        Ok(out)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            return Err(Error::IndexOutOfRange {
                index: mode,
                len: self.modes,
            });
        }
        Ok(())
    }
}

/// `|I⟩ = Σ_{k,l} η_k μ_l â⁺_k â⁺_l |0⟩` built operator by operator.
pub fn build_state(
    eta_amps: &[Complex64],
    mu_amps: &[Complex64],
    modes: &DiscreteModeSet,
) -> Result<FockState> {
    let m = modes.len();
    for amps in [eta_amps, mu_amps] {
        if amps.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                found: amps.len(),
            });
        }
    }
    let vacuum = FockState::vacuum(m);
    let mut state = FockState::zero(m, 2);
    for (l, &mu) in mu_amps.iter().enumerate() {
        if mu == Complex64::new(0.0, 0.0) {
            continue;
        }
        let one = vacuum.apply_creation(l)?;
        for (k, &eta) in eta_amps.iter().enumerate() {
            if eta == Complex64::new(0.0, 0.0) {
                continue;
            }
            state.add_scaled(eta * mu, &one.apply_creation(k)?);
        }
    }
    Ok(state)
}

/// Mode function of mode `k` including the `√w` of the discrete dictionary.
fn mode_function(modes: &DiscreteModeSet, k: usize, at: &SpacetimePoint, volume_weight: f64) -> Complex64 {
    let constants = modes.constants();
    let hbar = constants.hbar();
    let p = modes.momentum(k);
    let r = at.padded();
    let phase = (math::dot(p, r) - dispersion(p, constants) * at.time()) / hbar;
    let prefactor =
        libm::pow(2.0 * PI * hbar, -0.5 * modes.dimension() as f64) * math::sqrt(volume_weight);
    math::cis(phase) * prefactor
}

/// `⟨I|â⁺_k â_l|I⟩` for all `k, l`, row-major.
pub fn one_body_density(state: &FockState) -> Result<Vec<Complex64>> {
    let m = state.modes();
    let lowered: Vec<FockState> = (0..m)
        .map(|k| state.apply_annihilation(k))
        .collect::<Result<_>>()?;
    let mut rho = vec![Complex64::new(0.0, 0.0); m * m];
    for k in 0..m {
        for l in 0..m {
            rho[k * m + l] = lowered[k].inner(&lowered[l]);
        }
    }
    Ok(rho)
}

/// `⟨I|ψ⁺(r,t) ψ(r,t)|I⟩ / ⟨I|I⟩` before taking the real part.
pub fn expectation_density_complex(
    state: &FockState,
    modes: &DiscreteModeSet,
    at: &SpacetimePoint,
    volume_weight: f64,
) -> Result<Complex64> {
    if state.modes() != modes.len() {
        return Err(Error::LengthMismatch {
            expected: modes.len(),
            found: state.modes(),
        });
    }
    if at.dimension() != modes.dimension() {
        return Err(Error::DimensionMismatch {
            expected: modes.dimension(),
            found: at.dimension(),
        });
    }
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return Err(Error::NullState);
    }
    let m = modes.len();
    let phi: Vec<Complex64> = (0..m)
        .map(|k| mode_function(modes, k, at, volume_weight))
        .collect();
    let rho = one_body_density(state)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..m {
        for l in 0..m {
            sum += phi[k].conj() * phi[l] * rho[k * m + l];
        }
    }
    Ok(sum / norm)
}

pub fn expectation_density(
    state: &FockState,
    modes: &DiscreteModeSet,
    at: &SpacetimePoint,
    volume_weight: f64,
) -> Result<f64> {
    expectation_density_complex(state, modes, at, volume_weight).map(|z| z.re)
}

/// `Σ_k ⟨â⁺_k â_k⟩ / ⟨I|I⟩`
pub fn mean_particle_number(state: &FockState) -> Result<f64> {
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return Err(Error::NullState);
    }
    let m = state.modes();
    let rho = one_body_density(state)?;
    Ok((0..m).map(|k| rho[k * m + k].re).sum::<f64>() / norm)
}

/// Built state plus what is needed to evaluate it at many points.
#[derive(Debug, Clone)]
pub struct FockOracle {
    modes: DiscreteModeSet,
    state: FockState,
    rho: Vec<Complex64>,
    norm: f64,
    volume_weight: f64,
}

impl FockOracle {
    pub fn new(pair: &DiscretizedPair) -> Result<Self> {
        let state = build_state(&pair.eta, &pair.mu, &pair.modes)?;
        let norm = state.norm_sqr();
        if norm == 0.0 {
            return Err(Error::NullState);
        }
        let rho = one_body_density(&state)?;
        Ok(Self {
            modes: pair.modes.clone(),
            state,
            rho,
            norm,
            volume_weight: pair.volume_weight,
        })
    }

    pub fn from_distributions(
        eta: &ModeDistribution,
        mu: &ModeDistribution,
        constants: &PhysicalConstants,
        max_modes: usize,
    ) -> Result<Self> {
        Self::new(&discretize_pair(eta, mu, constants, max_modes)?)
    }

    pub fn state(&self) -> &FockState {
        &self.state
    }

    pub fn state_norm(&self) -> f64 {
        self.norm
    }

    /// Same value as [`expectation_density`], reusing the one-body density.
    pub fn density(&self, at: &SpacetimePoint) -> Result<f64> {
        if at.dimension() != self.modes.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.modes.dimension(),
                found: at.dimension(),
            });
        }
        let m = self.modes.len();
        let phi: Vec<Complex64> = (0..m)
            .map(|k| mode_function(&self.modes, k, at, self.volume_weight))
            .collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..m {
            for l in 0..m {
                sum += phi[k].conj() * phi[l] * self.rho[k * m + l];
            }
        }
        Ok(sum.re / self.norm)
    }
}
