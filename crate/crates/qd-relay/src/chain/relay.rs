//! Relay chain: 2^L sources at the leaves, 2^L − 1 Bell-state measurements
//! folded layer by layer, fiber hops dephasing each pair on the way in.
//!
//! Segment bookkeeping: a segment is a two-qubit state spanning some
//! contiguous run of sources, tagged with the indices of the sources whose
//! unconsumed photons form its two ends. Merging two neighbouring segments
//! interferes the right-end photon of the left segment with the left-end
//! photon of the right segment; which physical photon (X or XX) that is
//! depends on the pairing mode and layer.

use crate::error::{Error, Result};
use crate::formulas::{pmd_kappa, pmd_tau, PmdAlignment};
use crate::wavepacket::{
    bsm_overlap_cross, bsm_overlap_x, bsm_overlap_xx, FilterSpec, SourceKernel,
};

use super::source::{pair_state_with_coherence, source_pair_state, QdSource};
use super::state::{apply_pmd, fidelity_to_bell, TwoQubitState};
use super::swap::{bsm_swap_with_policy, BsmNoisePolicy};

/// One fiber hop between a source and its Bell-measurement station (or the
/// end user). Attenuation enters the pair-rate budget; the PMD parameters
/// dephase polarization through `apply_pmd`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberLink {
    /// Hop length, km.
    pub length_km: f64,
    /// Power loss, dB/km (0.2 is typical for telecom C-band fiber).
    pub attenuation_db_per_km: f64,
    /// PMD coefficient D, ps/√km.
    pub pmd_coeff: f64,
    /// Relative orientation of the principal polarization axes along the
    /// path: worst case adds the drifts, matched splicing cancels them.
    pub alignment: PmdAlignment,
}

impl FiberLink {
    pub fn new(
        length_km: f64,
        attenuation_db_per_km: f64,
        pmd_coeff: f64,
        alignment: PmdAlignment,
    ) -> Result<Self> {
        for (v, what) in [
            (length_km, "length_km"),
            (attenuation_db_per_km, "attenuation_db_per_km"),
            (pmd_coeff, "pmd_coeff"),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "fiber {what} must be finite and ≥ 0, got {v}"
                )));
            }
        }
        Ok(FiberLink {
            length_km,
            attenuation_db_per_km,
            pmd_coeff,
            alignment,
        })
    }

    /// Hop of the given length with typical C-band parameters
    /// (0.2 dB/km, D = 0.1 ps/√km, worst-case axis drift).
    pub fn with_length(length_km: f64) -> Result<Self> {
        FiberLink::new(length_km, 0.2, 0.1, PmdAlignment::WorstCase)
    }

    /// Intensity transmission 10^(−dB/10) of this hop.
    pub fn attenuation_factor(&self) -> f64 {
        10f64.powf(-self.attenuation_db_per_km * self.length_km / 10.0)
    }

    /// Differential polarization delay picked up on this hop, ps.
    pub fn pmd_tau(&self) -> Result<f64> {
        pmd_tau(self.pmd_coeff, self.length_km, self.alignment)
    }
}

/// Which photons meet at each Bell-state measurement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BsmPairing {
    /// Layer 1 interferes X with X; the heralded outer photons (the XX's)
    /// interfere at every later layer. Matches the demonstrated two-dot
    /// swapping geometry.
    #[default]
    LikePhotons,
    /// Every measurement interferes the XX of one source with the X of its
    /// neighbour; the end-to-end pair is the leftmost XX and rightmost X.
    Heterogeneous,
}

/// A chain of 2^L sources whose pairs are fused by 2^L − 1 swaps.
#[derive(Clone, Debug)]
pub struct RelayChain {
    depth: usize,
    sources: Vec<QdSource>,
    links: Vec<FiberLink>,
    filter: Option<FilterSpec>,
    pairing: BsmPairing,
    noise_policy: BsmNoisePolicy,
}

impl RelayChain {
    /// `sources` must hold exactly 2^depth entries, `links` exactly
    /// 2^(depth+1) (two hops per source, left then right).
    pub fn new(
        depth: usize,
        sources: Vec<QdSource>,
        links: Vec<FiberLink>,
        filter: Option<FilterSpec>,
        pairing: BsmPairing,
        noise_policy: BsmNoisePolicy,
    ) -> Result<Self> {
        if depth > 24 {
            return Err(Error::Domain(format!(
                "chain depth {depth} is out of range (max 24)"
            )));
        }
        let want = 1usize << depth;
        if sources.len() != want {
            return Err(Error::Contract(format!(
                "depth {depth} needs {want} sources, got {}",
                sources.len()
            )));
        }
        if links.len() != 2 * want {
            return Err(Error::Contract(format!(
                "depth {depth} needs {} links (two hops per source), got {}",
                2 * want,
                links.len()
            )));
        }
        Ok(RelayChain {
            depth,
            sources,
            links,
            filter,
            pairing,
            noise_policy,
        })
    }

    /// Homogeneous chain: every source and hop identical.
    pub fn uniform(
        depth: usize,
        source: &QdSource,
        link: &FiberLink,
        filter: Option<FilterSpec>,
    ) -> Result<Self> {
        let n = 1usize
            .checked_shl(depth as u32)
            .ok_or_else(|| Error::Domain(format!("chain depth {depth} is out of range")))?;
        RelayChain::new(
            depth,
            vec![source.clone(); n],
            vec![*link; 2 * n],
            filter,
            BsmPairing::LikePhotons,
            BsmNoisePolicy::OuterProduct,
        )
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn sources(&self) -> &[QdSource] {
        &self.sources
    }

    pub fn links(&self) -> &[FiberLink] {
        &self.links
    }

    pub fn filter(&self) -> Option<&FilterSpec> {
        self.filter.as_ref()
    }

    pub fn pairing(&self) -> BsmPairing {
        self.pairing
    }

    pub fn noise_policy(&self) -> BsmNoisePolicy {
        self.noise_policy
    }

    pub fn with_pairing(mut self, pairing: BsmPairing) -> Self {
        self.pairing = pairing;
        self
    }

    pub fn with_noise_policy(mut self, policy: BsmNoisePolicy) -> Self {
        self.noise_policy = policy;
        self
    }
}

/// Diagnostics for one Bell-state measurement in the fold.
#[derive(Clone, Debug)]
pub struct BsmDiag {
    /// 1-based fold layer (layer 1 fuses raw source pairs).
    pub layer: usize,
    /// Position of the measurement within its layer, left to right.
    pub index: usize,
    /// Mode overlap M of the two interfering photons.
    pub mode_overlap: f64,
    /// Heralding probability of this measurement.
    pub herald_prob: f64,
    /// Bell fidelity of the merged segment right after the swap.
    pub fidelity_after: f64,
}

/// Everything `chain_fidelity` knows when it finishes.
#[derive(Clone, Debug)]
pub struct ChainOutcome {
    pub final_state: TwoQubitState,
    /// Phase-maximized fidelity of `final_state` to the |φ+⟩ target.
    pub fidelity: f64,
    /// Product of every heralding probability and every filter transmission.
    pub success_prob: f64,
    /// One entry per Bell-state measurement, fold order.
    pub bsm: Vec<BsmDiag>,
    /// Fidelity of the leftmost surviving segment after each layer.
    pub per_layer_fidelity: Vec<f64>,
    /// Polarization coherence factor κ of each fiber hop, chain order.
    pub link_kappas: Vec<f64>,
    /// Product of the filter transmissions of every interfering X photon.
    pub transmission_product: f64,
    /// Non-fatal model-validity notes collected from the sources.
    pub warnings: Vec<String>,
}

struct Segment {
    state: TwoQubitState,
    /// Source whose photon forms the left end of the segment.
    left: usize,
    /// Source whose photon forms the right end.
    right: usize,
}

/// Fuses the whole chain and reports the end-to-end entangled state, its
/// Bell fidelity, the compound success probability, and per-stage
/// diagnostics.
pub fn chain_fidelity(chain: &RelayChain) -> Result<ChainOutcome> {
    let n = chain.sources.len();
    let warnings: Vec<String> = chain
        .sources
        .iter()
        .flat_map(|s| s.validity_warnings())
        .collect();

    let kernels: Vec<SourceKernel> = if chain.depth == 0 {
        Vec::new()
    } else {
        chain
            .sources
            .iter()
            .map(|s| {
                let sp = s.spectral();
                SourceKernel::new(s.t1_xx(), s.t1_x(), sp.fss, sp.jitter_fwhm, chain.filter())
            })
            .collect::<Result<_>>()?
    };

    // Pair states, dephased by the PMD of both hops. Phase damping of the
    // first photon with the conservative lifetime min(T1_X, T1_XX). A source
    // whose X photon passes the filter on its way into a measurement carries
    // the filter-aware which-path coherence; an unfiltered X (no
    // measurement, or the kept end photon in heterogeneous pairing) carries
    // the bare FSS factor — the two coincide when no filter is configured.
    let mut link_kappas = Vec::with_capacity(2 * n);
    let mut segments: Vec<Segment> = Vec::with_capacity(n);
    for (i, src) in chain.sources.iter().enumerate() {
        let x_kept = chain.depth == 0
            || (chain.pairing == BsmPairing::Heterogeneous && i == n - 1);
        let mut state = if x_kept {
            source_pair_state(src)
        } else {
            pair_state_with_coherence(kernels[i].chi(), src.spectral().g2)?
        };
        let t1 = src.t1_x().min(src.t1_xx());
        for hop in [2 * i, 2 * i + 1] {
            let tau = chain.links[hop].pmd_tau()?;
            link_kappas.push(pmd_kappa(tau, t1)?);
            state = apply_pmd(&state, tau, t1)?;
        }
        segments.push(Segment {
            state,
            left: i,
            right: i,
        });
    }

    if chain.depth == 0 {
        let state = segments.pop().expect("one segment at depth 0").state;
        let fidelity = fidelity_to_bell(&state);
        return Ok(ChainOutcome {
            final_state: state,
            fidelity,
            success_prob: 1.0,
            bsm: Vec::new(),
            per_layer_fidelity: Vec::new(),
            link_kappas,
            transmission_product: 1.0,
            warnings,
        });
    }

    // The filter sits on each X photon headed into a measurement: in like
    // pairing every source loses its X to layer 1; in heterogeneous pairing
    // every source but the last does.
    let transmission_product: f64 = match chain.pairing {
        BsmPairing::LikePhotons => kernels.iter().map(|k| k.transmission()).product(),
        BsmPairing::Heterogeneous => kernels[..n - 1].iter().map(|k| k.transmission()).product(),
    };

    let mut bsm = Vec::with_capacity(n - 1);
    let mut per_layer_fidelity = Vec::new();
    let mut success_prob = 1.0;
    let mut layer = 1;
    while segments.len() > 1 {
        let mut next = Vec::with_capacity(segments.len() / 2);
        let mut pairs = segments.chunks_exact(2);
        for (index, pair) in pairs.by_ref().enumerate() {
            let (l, r) = (&pair[0], &pair[1]);
            let (ka, kb) = (&kernels[l.right], &kernels[r.left]);
            let center =
                chain.sources[l.right].emission_energy() - chain.sources[r.left].emission_energy();
            let m = match chain.pairing {
                BsmPairing::LikePhotons if layer == 1 => bsm_overlap_x(ka, kb, center)?,
                BsmPairing::LikePhotons => bsm_overlap_xx(ka, kb, center)?,
                BsmPairing::Heterogeneous => bsm_overlap_cross(kb, ka, -center)?,
            };
            let (state, p) = bsm_swap_with_policy(&l.state, &r.state, m, chain.noise_policy)?;
            success_prob *= p;
            bsm.push(BsmDiag {
                layer,
                index,
                mode_overlap: m,
                herald_prob: p,
                fidelity_after: fidelity_to_bell(&state),
            });
            next.push(Segment {
                state,
                left: l.left,
                right: r.right,
            });
        }
        debug_assert!(pairs.remainder().is_empty());
        per_layer_fidelity.push(fidelity_to_bell(&next[0].state));
        segments = next;
        layer += 1;
    }

    success_prob *= transmission_product;
    let state = segments.pop().expect("fold ends with one segment").state;
    let fidelity = fidelity_to_bell(&state);
    Ok(ChainOutcome {
        final_state: state,
        fidelity,
        success_prob,
        bsm,
        per_layer_fidelity,
        link_kappas,
        transmission_product,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::state::concurrence;
    use crate::chain::swap::bsm_swap;
    use approx::assert_abs_diff_eq;

    fn zero_link() -> FiberLink {
        FiberLink::with_length(0.0).unwrap()
    }

    fn relay_source(jitter: f64, fss: f64) -> QdSource {
        QdSource::new(fss, 0.0, jitter, 2.0, 10.0, 0.0).unwrap()
    }

    fn relay_chain(depth: usize, jitter: f64, fss: f64) -> RelayChain {
        RelayChain::uniform(
            depth,
            &relay_source(jitter, fss),
            &zero_link(),
            Some(FilterSpec::new(4.0, 0.0).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn single_source_ideal() {
        let src = QdSource::new(0.0, 0.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        let chain = RelayChain::uniform(0, &src, &zero_link(), None).unwrap();
        let out = chain_fidelity(&chain).unwrap();
        assert_abs_diff_eq!(out.fidelity, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.success_prob, 1.0, epsilon = 1e-12);
        assert!(out.bsm.is_empty());
        assert_eq!(out.link_kappas, vec![1.0, 1.0]);
        assert_abs_diff_eq!(concurrence(&out.final_state), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn relay_depth_anchor_points() {
        // δE = 0.2 µeV, 4 µeV filter, P_X = 2, P_XX = 10, S = 0.05 µeV.
        let f: Vec<f64> = (1..=3)
            .map(|depth| chain_fidelity(&relay_chain(depth, 0.2, 0.05)).unwrap().fidelity)
            .collect();
        assert_abs_diff_eq!(f[0], 0.996060210751, epsilon = 1e-9);
        assert_abs_diff_eq!(f[1], 0.931555413516, epsilon = 1e-9);
        assert_abs_diff_eq!(f[2], 0.818794986099, epsilon = 1e-9);
        assert!((f[1] - 0.93).abs() <= 0.05);
        assert!(f[0] > f[1] && f[1] > f[2]);
    }

    #[test]
    fn success_prob_accounting() {
        let out = chain_fidelity(&relay_chain(2, 0.2, 0.05)).unwrap();
        assert_eq!(out.bsm.len(), 3);
        assert_eq!(out.bsm.iter().filter(|b| b.layer == 1).count(), 2);
        // Filter transmission of each of the four X photons.
        let t = 0.450657215082f64;
        assert_abs_diff_eq!(out.transmission_product, t.powi(4), epsilon = 1e-9);
        let herald: f64 = out.bsm.iter().map(|b| b.herald_prob).product();
        assert_abs_diff_eq!(
            out.success_prob,
            herald * out.transmission_product,
            epsilon = 1e-15
        );
        // Bell-diagonal-like inputs herald at ≤ ½ per measurement.
        assert!(herald <= 0.125 + 1e-12 && herald > 0.0);
        assert_eq!(out.per_layer_fidelity.len(), 2);
        assert_abs_diff_eq!(out.per_layer_fidelity[1], out.fidelity, epsilon = 1e-15);
    }

    #[test]
    fn werner_composition_across_two_layers() {
        // Three ideal-overlap swaps on Werner inputs: the Werner parameter
        // multiplies, so F_out = (3p⁴ + 1)/4.
        let p = 14.0 / 15.0;
        let w = TwoQubitState::werner(p).unwrap();
        let (left, pl) = bsm_swap(&w, &w, 1.0).unwrap();
        let (right, pr) = bsm_swap(&w, &w, 1.0).unwrap();
        let (top, pt) = bsm_swap(&left, &right, 1.0).unwrap();
        let expect = (3.0 * p.powi(4) + 1.0) / 4.0;
        assert_abs_diff_eq!(fidelity_to_bell(&top), expect, epsilon = 1e-9);
        assert_abs_diff_eq!(expect, 0.819125925926, epsilon = 1e-9);
        for prob in [pl, pr, pt] {
            assert_abs_diff_eq!(prob, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn jitter_and_fss_monotone() {
        let at = |jitter: f64, fss: f64| chain_fidelity(&relay_chain(1, jitter, fss)).unwrap().fidelity;
        assert!(at(0.2, 0.05) > at(1.0, 0.05));
        assert!(at(1.0, 0.05) > at(4.0, 0.05));
        assert!(at(0.2, 0.05) > at(0.2, 1.0));
        assert!(at(0.2, 1.0) > at(0.2, 4.0));
    }

    #[test]
    fn fiber_pmd_dephases_but_does_not_cost_heralds() {
        let src = relay_source(0.2, 0.05);
        let filter = || Some(FilterSpec::new(4.0, 0.0).unwrap());
        let near = RelayChain::uniform(1, &src, &zero_link(), filter()).unwrap();
        let far = RelayChain::uniform(1, &src, &FiberLink::with_length(25.0).unwrap(), filter())
            .unwrap();
        let (o_near, o_far) = (chain_fidelity(&near).unwrap(), chain_fidelity(&far).unwrap());
        assert!(o_far.fidelity < o_near.fidelity);
        assert_abs_diff_eq!(o_far.success_prob, o_near.success_prob, epsilon = 1e-12);
        // κ per hop: τ = 2·0.1·√25 = 1 ps against T1 = min(135, 12) ps.
        let kappa = pmd_kappa(1.0, 12.0).unwrap();
        assert_eq!(o_far.link_kappas.len(), 4);
        for k in &o_far.link_kappas {
            assert_abs_diff_eq!(*k, kappa, epsilon = 1e-12);
        }
        // Matched splicing cancels the dephasing exactly.
        let aligned = FiberLink::new(25.0, 0.2, 0.1, PmdAlignment::AlignedEqual).unwrap();
        let o_aligned =
            chain_fidelity(&RelayChain::uniform(1, &src, &aligned, filter()).unwrap()).unwrap();
        assert_abs_diff_eq!(o_aligned.fidelity, o_near.fidelity, epsilon = 1e-12);
    }

    #[test]
    fn heterogeneous_pairing() {
        let like = relay_chain(2, 0.2, 0.05);
        let het = like.clone().with_pairing(BsmPairing::Heterogeneous);
        let (o_like, o_het) = (chain_fidelity(&like).unwrap(), chain_fidelity(&het).unwrap());
        // XX-against-X interference is much poorer than matched photons.
        assert!(o_het.fidelity < o_like.fidelity);
        assert!(o_het.fidelity > 0.25);
        let t = 0.450657215082f64;
        assert_abs_diff_eq!(o_het.transmission_product, t.powi(3), epsilon = 1e-9);
        for b in &o_het.bsm {
            assert!(b.mode_overlap < 0.6, "cross overlap {}", b.mode_overlap);
        }
    }

    #[test]
    fn white_noise_policy_matches_for_symmetric_sources() {
        let chain = relay_chain(2, 0.2, 0.05);
        let white = chain.clone().with_noise_policy(BsmNoisePolicy::WhiteNoise);
        let (a, b) = (chain_fidelity(&chain).unwrap(), chain_fidelity(&white).unwrap());
        // Source reduced states are I/2, so both noise models coincide.
        assert_abs_diff_eq!(a.fidelity, b.fidelity, epsilon = 1e-12);
        assert_abs_diff_eq!(a.success_prob, b.success_prob, epsilon = 1e-12);
    }

    #[test]
    fn emission_energy_offset_detunes_interference() {
        let src = relay_source(0.2, 0.05);
        let detuned = QdSource::new(0.05, 0.0, 0.2, 2.0, 10.0, 2.0).unwrap();
        let filter = Some(FilterSpec::new(4.0, 0.0).unwrap());
        let links = vec![zero_link(); 4];
        let base = RelayChain::new(
            1,
            vec![src.clone(), src.clone()],
            links.clone(),
            filter,
            BsmPairing::LikePhotons,
            BsmNoisePolicy::OuterProduct,
        )
        .unwrap();
        let shifted = RelayChain::new(
            1,
            vec![src, detuned],
            links,
            filter,
            BsmPairing::LikePhotons,
            BsmNoisePolicy::OuterProduct,
        )
        .unwrap();
        let f0 = chain_fidelity(&base).unwrap();
        let f2 = chain_fidelity(&shifted).unwrap();
        assert!(f2.fidelity < f0.fidelity - 1e-4);
        assert!(f2.bsm[0].mode_overlap < f0.bsm[0].mode_overlap - 1e-4);
    }

    #[test]
    fn shape_validation() {
        let src = relay_source(0.2, 0.05);
        let links = vec![zero_link(); 8];
        assert!(RelayChain::new(
            2,
            vec![src.clone(); 3],
            links.clone(),
            None,
            BsmPairing::LikePhotons,
            BsmNoisePolicy::OuterProduct,
        )
        .is_err());
        assert!(RelayChain::new(
            2,
            vec![src.clone(); 4],
            vec![zero_link(); 7],
            None,
            BsmPairing::LikePhotons,
            BsmNoisePolicy::OuterProduct,
        )
        .is_err());
        assert!(FiberLink::new(-1.0, 0.2, 0.1, PmdAlignment::WorstCase).is_err());
        assert!(FiberLink::new(10.0, -0.2, 0.1, PmdAlignment::WorstCase).is_err());

        let loud = QdSource::new(0.05, 0.0, 0.2, 16.0, 10.0, 0.0).unwrap();
        let chain = RelayChain::uniform(1, &loud, &zero_link(), None).unwrap();
        let out = chain_fidelity(&chain).unwrap();
        assert_eq!(out.warnings.len(), 2);
    }
}
