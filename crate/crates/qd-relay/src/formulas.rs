//! Closed-form fidelity and visibility expressions for a cascade photon-pair
//! source: fine-structure splitting with multi-photon background, fiber
//! polarization-mode dispersion, cascade time correlation, and spectral
//! jitter. These double as oracles for the grid-based wave-packet engine.

use crate::error::{ensure_finite, Error, Result};
use crate::numerics::erfcx;
use crate::HBAR;
use num_complex::Complex64;

/// Spectral parameters of one source: fine-structure splitting `fss` (µeV),
/// radiative lifetimes (ps), multi-photon emission probability `g2`, and
/// center-energy jitter FWHM `jitter_fwhm` (µeV).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceSpectral {
    pub fss: f64,
    pub t1_x: f64,
    pub t1_xx: f64,
    pub g2: f64,
    pub jitter_fwhm: f64,
}

impl SourceSpectral {
    pub fn new(fss: f64, t1_x: f64, t1_xx: f64, g2: f64, jitter_fwhm: f64) -> Result<Self> {
        for (v, what) in [
            (fss, "fss"),
            (t1_x, "t1_x"),
            (t1_xx, "t1_xx"),
            (g2, "g2"),
            (jitter_fwhm, "jitter_fwhm"),
        ] {
            ensure_finite(v, what)?;
        }
        if fss < 0.0 {
            return Err(Error::Domain(format!("fss must be ≥ 0 µeV, got {fss}")));
        }
        if t1_x <= 0.0 || t1_xx <= 0.0 {
            return Err(Error::Domain(format!(
                "lifetimes must be positive, got t1_x={t1_x}, t1_xx={t1_xx}"
            )));
        }
        if !(0.0..1.0).contains(&g2) {
            return Err(Error::Domain(format!("g2 must lie in [0, 1), got {g2}")));
        }
        if jitter_fwhm < 0.0 {
            return Err(Error::Domain(format!(
                "jitter_fwhm must be ≥ 0 µeV, got {jitter_fwhm}"
            )));
        }
        Ok(SourceSpectral { fss, t1_x, t1_xx, g2, jitter_fwhm })
    }
}

/// Natural linewidth ħ/T1 in µeV of a lifetime T1 in ps.
pub fn natural_linewidth(t1: f64) -> f64 {
    HBAR / t1
}

/// Time-integrated HH–VV coherence left by fine-structure precession:
/// c = (1 + i·x)/(1 + x²) with x = S·T1_X/ħ. |c| = 1/√(1+x²).
pub fn fss_coherence(fss: f64, t1_x: f64) -> Complex64 {
    let x = fss * t1_x / HBAR;
    Complex64::new(1.0, x) / (1.0 + x * x)
}

/// Maximum entanglement fidelity of the emitted pair given fine-structure
/// splitting and multi-photon background:
/// f = ¼·(2 − g2 + 2(1−g2)/√(1 + (S·T1_X/ħ)²)).
pub fn fidelity_max(src: &SourceSpectral) -> f64 {
    let x = src.fss * src.t1_x / HBAR;
    0.25 * (2.0 - src.g2 + 2.0 * (1.0 - src.g2) / (1.0 + x * x).sqrt())
}

/// Residual coherence after a differential polarization group delay `tau`:
/// κ(τ) = (1 + τ/(2T1))·e^(−τ/(2T1)).
pub fn pmd_kappa(tau: f64, t1: f64) -> Result<f64> {
    ensure_finite(tau, "tau")?;
    if tau < 0.0 {
        return Err(Error::Domain(format!("tau must be ≥ 0 ps, got {tau}")));
    }
    if !(t1 > 0.0) {
        return Err(Error::Domain(format!("t1 must be positive, got {t1}")));
    }
    let r = tau / (2.0 * t1);
    Ok((1.0 + r) * (-r).exp())
}

/// Maximum pair fidelity surviving a differential group delay `tau` between
/// the polarization modes: ½ + (½ + τ/(4T1))·e^(−τ/(2T1)) = ½(1 + κ(τ)).
pub fn fidelity_pmd(tau: f64, t1: f64) -> Result<f64> {
    Ok(0.5 * (1.0 + pmd_kappa(tau, t1)?))
}

/// Relative orientation of two concatenated fibers' principal states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmdAlignment {
    /// Slow axis meets slow axis: delays add, τ = 2·D·√l per fiber pair.
    WorstCase,
    /// Equal-length fibers spliced slow-to-fast: delays cancel, τ = 0.
    AlignedEqual,
}

/// Total differential group delay τ accumulated over two fibers of length
/// `l` km each with PMD coefficient `d` ps/√km.
pub fn pmd_tau(d: f64, l: f64, mode: PmdAlignment) -> Result<f64> {
    ensure_finite(d, "d")?;
    ensure_finite(l, "l")?;
    if d < 0.0 || l < 0.0 {
        return Err(Error::Domain(format!(
            "pmd coefficient and length must be ≥ 0, got d={d}, l={l}"
        )));
    }
    Ok(match mode {
        PmdAlignment::WorstCase => 2.0 * d * l.sqrt(),
        PmdAlignment::AlignedEqual => 0.0,
    })
}

/// Indistinguishability ceiling imposed by the cascade's time correlation:
/// V = 1/(1 + T1_XX/T1_X). Holds for both photons of the pair.
pub fn visibility_cascade(t1_xx: f64, t1_x: f64) -> Result<f64> {
    ensure_finite(t1_xx, "t1_xx")?;
    ensure_finite(t1_x, "t1_x")?;
    if t1_xx <= 0.0 || t1_x <= 0.0 {
        return Err(Error::Domain(format!(
            "lifetimes must be positive, got t1_xx={t1_xx}, t1_x={t1_x}"
        )));
    }
    Ok(1.0 / (1.0 + t1_xx / t1_x))
}

/// Energy-to-phase convention used when converting the jitter σ (µeV) into
/// the dimensionless Faddeeva argument of [`visibility_jitter_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum JitterConvention {
    /// σ read in ordinary-frequency units: y = ħ/(2π·√2·σ·T1). The default.
    #[default]
    Cyclic,
    /// σ read in angular-frequency units: y = ħ/(√2·σ·T1). This is the
    /// convention the wave-packet overlap integral reproduces: the
    /// single-sided jitter average of |⟨b|b(Δ)⟩|² for an exponential packet
    /// equals √π·y·erfcx(y) with this y (see the validation report).
    Angular,
}

/// Two-photon interference visibility of one source under Gaussian spectral
/// jitter of FWHM `delta_e` (µeV): V = √π·y·e^(y²)·erfc(y), equivalently
/// ħ·Re w(i·y)/(√(8π)·σ·T1), with σ = δE/(2√(2 ln 2)).
pub fn visibility_jitter_with(delta_e: f64, t1: f64, conv: JitterConvention) -> Result<f64> {
    ensure_finite(delta_e, "delta_e")?;
    if delta_e < 0.0 {
        return Err(Error::Domain(format!("delta_e must be ≥ 0 µeV, got {delta_e}")));
    }
    if !(t1 > 0.0) || !t1.is_finite() {
        return Err(Error::Domain(format!("t1 must be positive and finite, got {t1}")));
    }
    if delta_e == 0.0 {
        return Ok(1.0);
    }
    let sigma = crate::fwhm_to_sigma(delta_e);
    let y = match conv {
        JitterConvention::Cyclic => {
            HBAR / (2.0 * std::f64::consts::PI * std::f64::consts::SQRT_2 * sigma * t1)
        }
        JitterConvention::Angular => HBAR / (std::f64::consts::SQRT_2 * sigma * t1),
    };
    Ok(std::f64::consts::PI.sqrt() * y * erfcx(y))
}

/// [`visibility_jitter_with`] in the default (cyclic) convention.
pub fn visibility_jitter(delta_e: f64, t1: f64) -> Result<f64> {
    visibility_jitter_with(delta_e, t1, JitterConvention::Cyclic)
}
