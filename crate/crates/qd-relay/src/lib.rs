//! Polarization-entangled photon pairs from quantum-dot cascades, their
//! temporal wave packets, and entanglement-swapping relay chains built from
//! them.
//!
//! Layers, from the bottom up:
//!
//! * [`numerics`] — complex error function, Gauss–Hermite averaging, time grids.
//! * [`formulas`] — closed-form fidelity/visibility expressions for a single
//!   source (fine-structure splitting, multi-pair emission, fiber
//!   polarization-mode dispersion, cascade time correlation, spectral jitter).
//! * [`wavepacket`] — discretized two-photon amplitudes on a time grid:
//!   reduced density matrices, purity, Lorentzian filtering, dispersion,
//!   jitter-averaged mode overlap, plus closed-form interference kernels.
//! * [`chain`] — two-qubit states, Bell-state measurements with imperfect
//!   photon indistinguishability, fiber links, and the recursive relay chain.
//! * [`sweep`] — TOML-configured parameter sweeps with CSV/JSON/PPM output.
//!
//! Units throughout: energies in µeV, times in ps, fiber lengths in km,
//! rates in Hz. See [`HBAR`].

pub mod chain;
pub mod error;
pub mod formulas;
pub mod numerics;
pub mod sweep;
pub mod validation;
pub mod wavepacket;

pub use error::{Error, Result};

/// Reduced Planck constant in µeV·ps.
pub const HBAR: f64 = 658.2119569;

/// Converts a FWHM in µeV to the Gaussian σ of the jitter distribution.
pub fn fwhm_to_sigma(fwhm: f64) -> f64 {
    // FWHM = 2 sqrt(2 ln 2) σ
    fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
}
