//! Reference computations shared by the integration tests. None of these go
//! through the factorized or overlap-collapsed code paths of the library.

#![allow(dead_code)]

use std::f64::consts::PI;

use multimode_core::{Complex64, ModeDistribution, PhysicalConstants};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Continuum free evolution of the normalized 1D Gaussian
/// `(2πσ²)^(-1/4) exp(-(p-p0)²/4σ²) exp(-i p x0/ħ)`: the packet centre moves
/// as `x0 + p0 t / m` and its width grows with `t`.
pub fn free_gaussian(
    x: f64,
    t: f64,
    p0: f64,
    sigma: f64,
    x0: f64,
    c: &PhysicalConstants,
) -> Complex64 {
    let (hbar, m) = (c.hbar(), c.mass());
    let a = Complex64::new(1.0 / (4.0 * sigma * sigma), t / (2.0 * m * hbar));
    let y = x - x0;
    let drift = y - p0 * t / m;
    let envelope = (-(drift * drift) / (a * 4.0 * hbar * hbar)).exp();
    let phase = Complex64::new(0.0, (p0 * y - p0 * p0 * t / (2.0 * m)) / hbar).exp();
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25) / (2.0 * PI * hbar).sqrt();
    (Complex64::new(PI, 0.0) / a).sqrt() * envelope * phase * norm
}

/// `(2πħ)^-1 ΣΣ w² exp(i((q-p) r - (E_q - E_p) t)/ħ) a*(p) b(q)` in 1D.
pub fn cross_double_sum(
    a: &ModeDistribution,
    b: &ModeDistribution,
    x: f64,
    t: f64,
    c: &PhysicalConstants,
) -> Complex64 {
    let grid = a.grid();
    let w = grid.weight();
    let energy = |p: f64| p * p / (2.0 * c.mass());
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, p) in grid.points().enumerate() {
        for (j, q) in grid.points().enumerate() {
            let phase = ((q[0] - p[0]) * x - (energy(q[0]) - energy(p[0])) * t) / c.hbar();
            sum += Complex64::from_polar(1.0, phase)
                * a.amplitudes()[i].conj()
                * b.amplitudes()[j]
                * (w * w);
        }
    }
    sum / (2.0 * PI * c.hbar())
}

/// `Σ w a*_k b_k`
pub fn overlap(a: &ModeDistribution, b: &ModeDistribution) -> Complex64 {
    let w = a.grid().weight();
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y * w)
        .sum()
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// `count` distinct indices below `len`.
pub fn distinct_indices(rng: &mut ChaCha8Rng, len: usize, count: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let i = rng.random_range(0..len);
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

/// Rectangle-rule integral of `f` over `[-half, half]` with `n` points.
pub fn integrate(half: f64, n: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let dx = 2.0 * half / (n - 1) as f64;
    (0..n).map(|i| f(-half + i as f64 * dx)).sum::<f64>() * dx
}
