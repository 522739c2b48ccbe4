//! Single-particle detection statistics for two identical bosons emitted in
//! multimode states by two independent sources.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! * [`modes`]: momentum grids and complex mode distributions.
//! * [`dynamics`]: free propagation of plane-wave superpositions and the
//!   cross functions built from two distributions.
//! * [`interference`]: overlap coefficients, the two-particle state norm and
//!   the three-term decomposition of the detection density.
//! * [`fock`]: a brute-force occupation-number evaluator of the same density,
//!   used to validate the closed form.
//!
//! IO, configuration and the command-line front end live in the `multimode`
//! crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
mod error;
pub mod fock;
pub mod interference;
mod math;
pub mod modes;

pub use num_complex::Complex64;

pub use dynamics::{
    cross_amplitude, dispersion, propagate, CrossAmplitude, PhaseWarning, SpacetimePoint,
};
pub use error::{Error, Result};
pub use fock::{
    build_state, discretize_pair, expectation_density, DiscreteModeSet, DiscretizedPair, FockOracle,
    FockState, Occupation,
};
pub use interference::{
    detection_probability, overlap_set, position_sweep, state_norm_literal, DetectionModel,
    DetectionResult, OverlapSet,
};
pub use modes::{
    inner_product, make_gaussian, normalize, Axis, DistributionKind, ModeDistribution,
    MomentumGrid, PhysicalConstants, UniformGrid, MAX_DIMENSION,
};
