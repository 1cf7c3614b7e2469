//! Heralded pair-rate budget: source clock × generation × extraction,
//! attenuated per fiber hop, thinned by every Bell-measurement herald.

use crate::error::{ensure_finite, Error, Result};

use super::relay::FiberLink;

/// Rate-budget inputs for one source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateParams {
    /// Excitation clock R, Hz.
    pub excitation_rate_hz: f64,
    /// Probability ε that a clock cycle yields a photon pair.
    pub pair_generation: f64,
    /// Extraction/collection efficiency η per pair.
    pub extraction: f64,
}

impl Default for RateParams {
    fn default() -> Self {
        RateParams {
            excitation_rate_hz: 80e6,
            pair_generation: 0.9,
            extraction: 0.65,
        }
    }
}

impl RateParams {
    pub fn new(excitation_rate_hz: f64, pair_generation: f64, extraction: f64) -> Result<Self> {
        ensure_finite(excitation_rate_hz, "excitation_rate_hz")?;
        if excitation_rate_hz <= 0.0 {
            return Err(Error::Domain(format!(
                "excitation rate must be > 0 Hz, got {excitation_rate_hz}"
            )));
        }
        for (v, what) in [(pair_generation, "pair_generation"), (extraction, "extraction")] {
            ensure_finite(v, what)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!(
                    "{what} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(RateParams {
            excitation_rate_hz,
            pair_generation,
            extraction,
        })
    }
}

/// End-to-end heralded pair rate in Hz: R·ε·η, times 10^(−dB/10) for each
/// fiber hop a photon crosses, times every Bell-measurement success
/// probability.
pub fn pair_rate(r: &RateParams, links: &[FiberLink], bsm_probs: &[f64]) -> Result<f64> {
    let mut rate = r.excitation_rate_hz * r.pair_generation * r.extraction;
    for link in links {
        rate *= link.attenuation_factor();
    }
    for (i, &p) in bsm_probs.iter().enumerate() {
        ensure_finite(p, "bsm probability")?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "bsm probability #{i} must lie in [0, 1], got {p}"
            )));
        }
        rate *= p;
    }
    Ok(rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn bare_source_rate() {
        let r = RateParams::default();
        assert_abs_diff_eq!(pair_rate(&r, &[], &[]).unwrap(), 46.8e6, epsilon = 1.0);
        // Zero-length hops are exactly transparent.
        let links = [FiberLink::with_length(0.0).unwrap(); 4];
        assert_abs_diff_eq!(
            pair_rate(&r, &links, &[]).unwrap(),
            r.excitation_rate_hz * r.pair_generation * r.extraction,
            epsilon = 0.0
        );
    }

    #[test]
    fn hundred_km_costs_twenty_db() {
        let r = RateParams::default();
        let base = pair_rate(&r, &[], &[]).unwrap();
        let long = pair_rate(&r, &[FiberLink::with_length(100.0).unwrap()], &[]).unwrap();
        assert_relative_eq!(long / base, 1e-2, epsilon = 1e-12);
    }

    #[test]
    fn heralds_thin_the_rate() {
        let r = RateParams::default();
        let base = pair_rate(&r, &[], &[]).unwrap();
        let one = pair_rate(&r, &[], &[0.5]).unwrap();
        let three = pair_rate(&r, &[], &[0.5, 0.5, 0.5]).unwrap();
        assert_relative_eq!(one, base * 0.5, epsilon = 1e-12);
        assert_relative_eq!(three, base * 0.125, epsilon = 1e-12);
        // Extra links never help.
        let l50 = FiberLink::with_length(50.0).unwrap();
        let with_one = pair_rate(&r, &[l50], &[]).unwrap();
        let with_two = pair_rate(&r, &[l50, l50], &[]).unwrap();
        assert!(with_one < base && with_two < with_one);
    }

    #[test]
    fn input_validation() {
        assert!(RateParams::new(0.0, 0.9, 0.65).is_err());
        assert!(RateParams::new(80e6, 1.2, 0.65).is_err());
        assert!(RateParams::new(80e6, 0.9, -0.1).is_err());
        let r = RateParams::default();
        assert!(pair_rate(&r, &[], &[1.5]).is_err());
        assert!(pair_rate(&r, &[], &[f64::NAN]).is_err());
    }
}
