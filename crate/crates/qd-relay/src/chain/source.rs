//! Quantum-dot source model: Purcell-scaled cascade lifetimes plus the
//! polarization pair state the cascade emits.

use crate::error::{ensure_finite, Error, Result};
use crate::formulas::{fss_coherence, SourceSpectral};
use num_complex::Complex64;

use super::state::TwoQubitState;

/// Exciton lifetime at Purcell factor 1 (ps); the corresponding natural
/// linewidth ħ/T1 is ≈ 2.4 µeV.
pub const BASE_T1_X: f64 = 270.0;
/// Biexciton lifetime at Purcell factor 1 (ps).
pub const BASE_T1_XX: f64 = 120.0;

/// Purcell factor above which the single-photon character of the cascade
/// degrades (re-excitation); sources beyond it carry a validity warning.
pub const PURCELL_VALIDITY_LIMIT: f64 = 15.0;

/// A photon-pair source: spectral parameters with lifetimes scaled by the
/// cavity Purcell factors, T1 = base/P.
#[derive(Clone, Debug)]
pub struct QdSource {
    spectral: SourceSpectral,
    p_x: f64,
    p_xx: f64,
    emission_energy: f64,
}

impl QdSource {
    /// `fss`: fine-structure splitting S, µeV; `g2`: multi-photon emission
    /// probability ∈ [0,1); `jitter_fwhm`: center-energy wander FWHM, µeV;
    /// `p_x`, `p_xx`: Purcell factors ≥ 1; `emission_energy`: center-energy
    /// offset from the chain's common tuning target, µeV.
    pub fn new(
        fss: f64,
        g2: f64,
        jitter_fwhm: f64,
        p_x: f64,
        p_xx: f64,
        emission_energy: f64,
    ) -> Result<Self> {
        for (v, what) in [(p_x, "p_x"), (p_xx, "p_xx")] {
            ensure_finite(v, what)?;
            if v < 1.0 {
                return Err(Error::Domain(format!(
                    "Purcell factor {what} must be ≥ 1, got {v}"
                )));
            }
        }
        ensure_finite(emission_energy, "emission_energy")?;
        let spectral = SourceSpectral::new(
            fss,
            BASE_T1_X / p_x,
            BASE_T1_XX / p_xx,
            g2,
            jitter_fwhm,
        )?;
        Ok(QdSource {
            spectral,
            p_x,
            p_xx,
            emission_energy,
        })
    }

    pub fn spectral(&self) -> &SourceSpectral {
        &self.spectral
    }

    /// Effective exciton lifetime BASE_T1_X / P_X, ps.
    pub fn t1_x(&self) -> f64 {
        self.spectral.t1_x
    }

    /// Effective biexciton lifetime BASE_T1_XX / P_XX, ps.
    pub fn t1_xx(&self) -> f64 {
        self.spectral.t1_xx
    }

    pub fn p_x(&self) -> f64 {
        self.p_x
    }

    pub fn p_xx(&self) -> f64 {
        self.p_xx
    }

    pub fn emission_energy(&self) -> f64 {
        self.emission_energy
    }

    /// Non-fatal validity notes (extreme Purcell enhancement).
    pub fn validity_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        for (p, what) in [(self.p_x, "P_X"), (self.p_xx, "P_XX")] {
            if p > PURCELL_VALIDITY_LIMIT {
                w.push(format!(
                    "{what} = {p} exceeds {PURCELL_VALIDITY_LIMIT}; re-excitation makes such \
                     enhancement unrealistic"
                ));
            }
        }
        w
    }
}

/// Pair state with an explicitly supplied HH–VV coherence, mixed with white
/// noise of weight g2 (multi-photon events carry no polarization
/// correlation). The chain passes the filter-aware which-path coherence of
/// the X photon here; `source_pair_state` passes the bare FSS factor.
pub fn pair_state_with_coherence(coherence: Complex64, g2: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&g2) {
        return Err(Error::Domain(format!("g2 must lie in [0, 1], got {g2}")));
    }
    if coherence.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "pair coherence magnitude must be ≤ 1, got {}",
            coherence.norm()
        )));
    }
    let mut m = [Complex64::new(0.0, 0.0); 16];
    m[0] = Complex64::new(0.5, 0.0);
    m[15] = Complex64::new(0.5, 0.0);
    m[3] = 0.5 * coherence;
    m[12] = 0.5 * coherence.conj();
    for v in &mut m {
        *v *= 1.0 - g2;
    }
    for i in 0..4 {
        m[i * 4 + i] += 0.25 * g2;
    }
    TwoQubitState::new(m)
}

/// Polarization state of one emitted pair: HH/VV superposition whose
/// coherence is the time-averaged FSS precession factor
/// c = (1 + i·x)/(1 + x²), x = S·T1_X/ħ.
pub fn source_pair_state(q: &QdSource) -> TwoQubitState {
    let sp = q.spectral();
    let c = fss_coherence(sp.fss, sp.t1_x);
    pair_state_with_coherence(c, sp.g2)
        .expect("pair state satisfies the density contract by construction")
}
