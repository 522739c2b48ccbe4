//! Overlap coefficients and the single-detection density of the two-boson
//! state `|I⟩ = ∫∫ η(p) μ(q) a⁺(p) a⁺(q) |0⟩`.
//!
//! With `c = ∫ μ*(Q) η(Q) dQ` the state norm is `⟨I|I⟩ = 1 + |c|²` and
//!
//! ```text
//! P(r, t) = α_ηη P_μμ + α_μμ P_ηη + 2 Re(α_μη P_ημ)
//! ```
//!
//! where `α_μη = c / ⟨I|I⟩`, `α_ηη = α_μμ = 1 / ⟨I|I⟩` and
//! `P_ab = conj(ψ_a) ψ_b`. The last term vanishes when the two distributions
//! share no modes.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::{propagate, SpacetimePoint};
use crate::error::{Error, Result};
use crate::modes::{inner_product, ModeDistribution, PhysicalConstants};

/// Largest accepted deviation of a squared norm from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Time- and position-independent coefficients of the detection density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSet {
    /// `∫ μ* η`
    pub c: Complex64,
    /// `⟨I|I⟩ = 1 + |c|²`
    pub state_norm: f64,
    pub alpha_mu_eta: Complex64,
    pub alpha_eta_mu: Complex64,
    pub alpha_eta_eta: f64,
    pub alpha_mu_mu: f64,
}

impl OverlapSet {
    fn from_overlap(c: Complex64) -> Self {
        let state_norm = 1.0 + c.norm_sqr();
        let inverse = 1.0 / state_norm;
        Self {
            c,
            state_norm,
            alpha_mu_eta: c * inverse,
            alpha_eta_mu: c.conj() * inverse,
            alpha_eta_eta: inverse,
            alpha_mu_mu: inverse,
        }
    }
}

/// Detection density split into its single-source and interference parts.
///
/// `total` is always `term_mu_mu + term_eta_eta + interference`, summed in
/// that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionResult {
    pub total: f64,
    /// `α_ηη · P_μμ`
    pub term_mu_mu: f64,
    /// `α_μμ · P_ηη`
    pub term_eta_eta: f64,
    /// `2 Re(α_μη · P_ημ)`
    pub interference: f64,
}

impl DetectionResult {
    fn from_terms(term_mu_mu: f64, term_eta_eta: f64, interference: f64) -> Self {
        Self {
            total: term_mu_mu + term_eta_eta + interference,
            term_mu_mu,
            term_eta_eta,
            interference,
        }
    }
}

fn check_pair(eta: &ModeDistribution, mu: &ModeDistribution) -> Result<()> {
    if eta.grid() != mu.grid() {
        return Err(Error::GridMismatch);
    }
    eta.check_normalized(NORMALIZATION_TOLERANCE)?;
    mu.check_normalized(NORMALIZATION_TOLERANCE)
}

pub fn overlap_set(eta: &ModeDistribution, mu: &ModeDistribution) -> Result<OverlapSet> {
    check_pair(eta, mu)?;
    Ok(OverlapSet::from_overlap(inner_product(mu, eta)?))
}

/// `1 + ∫∫ η*(p) μ*(q) η(q) μ(p)` summed literally over both grid copies.
///
/// Quadratic in the grid size; kept as a cross-check of `1 + |c|²`.
pub fn state_norm_literal(eta: &ModeDistribution, mu: &ModeDistribution) -> Result<f64> {
    if eta.grid() != mu.grid() {
        return Err(Error::GridMismatch);
    }
    let w = eta.grid().weight();
    let (e, m) = (eta.amplitudes(), mu.amplitudes());
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..e.len() {
        let outer = e[p].conj() * m[p];
        if outer.re == 0.0 && outer.im == 0.0 {
            continue;
        }
        for q in 0..e.len() {
            sum += outer * m[q].conj() * e[q];
        }
    }
    Ok(1.0 + sum.re * w * w)
}

/// A validated source pair with its overlap coefficients precomputed.
#[derive(Debug, Clone, Copy)]
pub struct DetectionModel<'a> {
    eta: &'a ModeDistribution,
    mu: &'a ModeDistribution,
    overlap: OverlapSet,
}

impl<'a> DetectionModel<'a> {
    pub fn new(eta: &'a ModeDistribution, mu: &'a ModeDistribution) -> Result<Self> {
        let overlap = overlap_set(eta, mu)?;
        Ok(Self { eta, mu, overlap })
    }

    pub fn overlap(&self) -> &OverlapSet {
        &self.overlap
    }

    pub fn at(&self, at: &SpacetimePoint, constants: &PhysicalConstants) -> Result<DetectionResult> {
        let psi_eta = propagate(self.eta, at, constants)?;
        let psi_mu = propagate(self.mu, at, constants)?;
        let p_mu_mu = psi_mu.norm_sqr();
        let p_eta_eta = psi_eta.norm_sqr();
        let p_eta_mu = psi_eta.conj() * psi_mu;
        let o = &self.overlap;
        Ok(DetectionResult::from_terms(
            o.alpha_eta_eta * p_mu_mu,
            o.alpha_mu_mu * p_eta_eta,
            2.0 * (o.alpha_mu_eta * p_eta_mu).re,
        ))
    }
}

/// Density of single detections at one spacetime point.
pub fn detection_probability(
    eta: &ModeDistribution,
    mu: &ModeDistribution,
    at: &SpacetimePoint,
    constants: &PhysicalConstants,
) -> Result<DetectionResult> {
    DetectionModel::new(eta, mu)?.at(at, constants)
}

/// Detection densities at several positions, in input order.
pub fn position_sweep<P: AsRef<[f64]>>(
    eta: &ModeDistribution,
    mu: &ModeDistribution,
    positions: &[P],
    time: f64,
    constants: &PhysicalConstants,
) -> Result<Vec<DetectionResult>> {
    let model = DetectionModel::new(eta, mu)?;
    positions
        .iter()
        .map(|r| model.at(&SpacetimePoint::new(r.as_ref(), time)?, constants))
        .collect()
}
