//! TOML configuration: flat sections `[source]`, `[fiber]`, `[filter]`,
//! `[sweep]`, every key optional with paper-anchored defaults, unknown keys
//! rejected by name.

use serde::{Deserialize, Serialize};

use crate::chain::{BsmNoisePolicy, BsmPairing, FiberLink, QdSource, RateParams, RelayChain};
use crate::error::{Error, Result};
use crate::formulas::PmdAlignment;
use crate::wavepacket::FilterSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SourceSection {
    /// Fine-structure splitting S, µeV.
    pub fss: f64,
    /// Multi-photon emission probability.
    pub g2: f64,
    /// Center-energy jitter δE (FWHM), µeV.
    pub jitter: f64,
    /// Purcell factor of the X transition (T1_X = 270 ps / purcell_x).
    pub purcell_x: f64,
    /// Purcell factor of the XX transition (T1_XX = 120 ps / purcell_xx).
    pub purcell_xx: f64,
    /// Excitation clock, Hz.
    pub excitation_rate_hz: f64,
    /// Pair-generation probability ε per clock cycle.
    pub pair_generation: f64,
    /// Pair extraction efficiency η.
    pub extraction: f64,
}

impl Default for SourceSection {
    fn default() -> Self {
        SourceSection {
            fss: 0.0,
            g2: 0.0,
            jitter: 0.0,
            purcell_x: 1.0,
            purcell_xx: 1.0,
            excitation_rate_hz: 80e6,
            pair_generation: 0.9,
            extraction: 0.65,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignmentName {
    WorstCase,
    AlignedEqual,
}

impl From<AlignmentName> for PmdAlignment {
    fn from(a: AlignmentName) -> PmdAlignment {
        match a {
            AlignmentName::WorstCase => PmdAlignment::WorstCase,
            AlignmentName::AlignedEqual => PmdAlignment::AlignedEqual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FiberSection {
    /// Length of each hop, km.
    pub length_km: f64,
    pub attenuation_db_per_km: f64,
    /// PMD coefficient D, ps/√km.
    pub pmd_coeff: f64,
    pub alignment: AlignmentName,
}

impl Default for FiberSection {
    fn default() -> Self {
        FiberSection {
            length_km: 0.0,
            attenuation_db_per_km: 0.2,
            pmd_coeff: 0.1,
            alignment: AlignmentName::WorstCase,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterSection {
    /// Lorentzian FWHM δE_f in µeV; absent means no filter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fwhm: Option<f64>,
    /// Filter center offset from the X line, µeV.
    pub center: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    /// Uniform Purcell factor vs jitter.
    Fig2a,
    /// Frequency-selective cavity (P_XX = 7·P_X) vs jitter.
    Fig2b,
    /// Filter width vs jitter at P_X = 2, P_XX = 10.
    Fig2c,
    /// Axes taken from the config file.
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParam {
    /// Uniform Purcell factor: P_X = P_XX = value.
    Purcell,
    /// Selective cavity: P_X = value, P_XX = 7·value.
    PurcellSelective,
    PurcellX,
    PurcellXx,
    /// Center-energy jitter δE (FWHM), µeV.
    Jitter,
    /// Lorentzian filter FWHM δE_f, µeV.
    FilterFwhm,
    /// Fine-structure splitting S, µeV.
    Fss,
    /// Per-hop fiber length, km.
    FiberLength,
}

impl AxisParam {
    pub fn name(&self) -> &'static str {
        match self {
            AxisParam::Purcell => "purcell",
            AxisParam::PurcellSelective => "purcell_selective",
            AxisParam::PurcellX => "purcell_x",
            AxisParam::PurcellXx => "purcell_xx",
            AxisParam::Jitter => "jitter",
            AxisParam::FilterFwhm => "filter_fwhm",
            AxisParam::Fss => "fss",
            AxisParam::FiberLength => "fiber_length",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingName {
    LikePhotons,
    Heterogeneous,
}

impl From<PairingName> for BsmPairing {
    fn from(p: PairingName) -> BsmPairing {
        match p {
            PairingName::LikePhotons => BsmPairing::LikePhotons,
            PairingName::Heterogeneous => BsmPairing::Heterogeneous,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseName {
    OuterProduct,
    WhiteNoise,
}

impl From<NoiseName> for BsmNoisePolicy {
    fn from(n: NoiseName) -> BsmNoisePolicy {
        match n {
            NoiseName::OuterProduct => BsmNoisePolicy::OuterProduct,
            NoiseName::WhiteNoise => BsmNoisePolicy::WhiteNoise,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub preset: PresetName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis1_param: Option<AxisParam>,
    pub axis1_min: f64,
    pub axis1_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2_param: Option<AxisParam>,
    pub axis2_min: f64,
    pub axis2_max: f64,
    /// Lattice points per axis.
    pub grid: usize,
    pub depths: Vec<usize>,
    pub pairing: PairingName,
    pub noise: NoiseName,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            preset: PresetName::Custom,
            axis1_param: None,
            axis1_min: 0.0,
            axis1_max: 0.0,
            axis2_param: None,
            axis2_min: 0.0,
            axis2_max: 0.0,
            grid: 25,
            depths: vec![1, 2, 3],
            pairing: PairingName::LikePhotons,
            noise: NoiseName::OuterProduct,
        }
    }
}

/// The raw document: what `parse_config` reads and `serialize_config`
/// writes. All sections optional, all keys defaulted.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigDoc {
    pub source: SourceSection,
    pub fiber: FiberSection,
    pub filter: FilterSection,
    pub sweep: SweepSection,
}

/// Parses and validates a TOML document. Unknown keys, unparsable values,
/// and out-of-range settings all name the offending key.
pub fn parse_config(text: &str) -> Result<ConfigDoc> {
    let doc: ConfigDoc =
        toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim().replace('\n', " ")))?;
    validate_doc(&doc)?;
    Ok(doc)
}

/// Inverse of `parse_config`: a document that parses back to an equal value.
pub fn serialize_config(doc: &ConfigDoc) -> Result<String> {
    toml::to_string_pretty(doc).map_err(|e| Error::Config(e.to_string()))
}

fn check(ok: bool, key: &str, got: f64, want: &str) -> Result<()> {
    if ok && got.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{key} = {got} out of range ({want})")))
    }
}

fn validate_doc(doc: &ConfigDoc) -> Result<()> {
    let s = &doc.source;
    check(s.fss >= 0.0, "source.fss", s.fss, "≥ 0 µeV")?;
    check((0.0..=1.0).contains(&s.g2), "source.g2", s.g2, "[0, 1]")?;
    check(s.jitter >= 0.0, "source.jitter", s.jitter, "≥ 0 µeV")?;
    check(s.purcell_x >= 1.0, "source.purcell_x", s.purcell_x, "≥ 1")?;
    check(s.purcell_xx >= 1.0, "source.purcell_xx", s.purcell_xx, "≥ 1")?;
    check(
        s.excitation_rate_hz > 0.0,
        "source.excitation_rate_hz",
        s.excitation_rate_hz,
        "> 0 Hz",
    )?;
    check(
        (0.0..=1.0).contains(&s.pair_generation),
        "source.pair_generation",
        s.pair_generation,
        "[0, 1]",
    )?;
    check(
        (0.0..=1.0).contains(&s.extraction),
        "source.extraction",
        s.extraction,
        "[0, 1]",
    )?;

    let f = &doc.fiber;
    check(f.length_km >= 0.0, "fiber.length_km", f.length_km, "≥ 0 km")?;
    check(
        f.attenuation_db_per_km >= 0.0,
        "fiber.attenuation_db_per_km",
        f.attenuation_db_per_km,
        "≥ 0 dB/km",
    )?;
    check(f.pmd_coeff >= 0.0, "fiber.pmd_coeff", f.pmd_coeff, "≥ 0 ps/√km")?;

    if let Some(w) = doc.filter.fwhm {
        check(w > 0.0, "filter.fwhm", w, "> 0 µeV")?;
    }
    check(
        doc.filter.center.is_finite(),
        "filter.center",
        doc.filter.center,
        "finite µeV",
    )?;

    let sw = &doc.sweep;
    if sw.grid == 0 || sw.grid > 4096 {
        return Err(Error::Config(format!(
            "sweep.grid = {} out of range (1..=4096)",
            sw.grid
        )));
    }
    if sw.depths.is_empty() {
        return Err(Error::Config("sweep.depths must not be empty".into()));
    }
    for &d in &sw.depths {
        if d > 24 {
            return Err(Error::Config(format!(
                "sweep.depths entry {d} out of range (0..=24)"
            )));
        }
    }
    for (param, min, max, which) in [
        (sw.axis1_param, sw.axis1_min, sw.axis1_max, "axis1"),
        (sw.axis2_param, sw.axis2_min, sw.axis2_max, "axis2"),
    ] {
        if let Some(p) = param {
            if !min.is_finite() || !max.is_finite() || min > max {
                return Err(Error::Config(format!(
                    "sweep.{which}: range [{min}, {max}] for {} is invalid",
                    p.name()
                )));
            }
            let lo = match p {
                AxisParam::Purcell
                | AxisParam::PurcellSelective
                | AxisParam::PurcellX
                | AxisParam::PurcellXx => 1.0,
                AxisParam::FilterFwhm => f64::MIN_POSITIVE,
                _ => 0.0,
            };
            if min < lo {
                return Err(Error::Config(format!(
                    "sweep.{which}: {} must start at ≥ {lo}, got {min}",
                    p.name()
                )));
            }
        }
    }
    Ok(())
}

/// Fixed (non-swept) chain parameters of one evaluation cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainTemplate {
    pub fss: f64,
    pub g2: f64,
    pub jitter: f64,
    pub purcell_x: f64,
    pub purcell_xx: f64,
    pub link: FiberLink,
    pub filter: Option<FilterSpec>,
    pub pairing: BsmPairing,
    pub noise: BsmNoisePolicy,
    pub rate: RateParams,
}

impl ChainTemplate {
    /// Applies one sweep-axis value, returning the modified template.
    pub fn with_axis(&self, param: AxisParam, value: f64) -> Result<ChainTemplate> {
        let mut t = self.clone();
        match param {
            AxisParam::Purcell => {
                t.purcell_x = value;
                t.purcell_xx = value;
            }
            AxisParam::PurcellSelective => {
                t.purcell_x = value;
                t.purcell_xx = 7.0 * value;
            }
            AxisParam::PurcellX => t.purcell_x = value,
            AxisParam::PurcellXx => t.purcell_xx = value,
            AxisParam::Jitter => t.jitter = value,
            AxisParam::FilterFwhm => {
                let center = t.filter.map(|f| f.center_detuning).unwrap_or(0.0);
                t.filter = Some(FilterSpec::new(value, center)?);
            }
            AxisParam::Fss => t.fss = value,
            AxisParam::FiberLength => t.link.length_km = value,
        }
        Ok(t)
    }

    /// Homogeneous relay chain of the given depth from this template.
    pub fn build_chain(&self, depth: usize) -> Result<RelayChain> {
        let source = QdSource::new(
            self.fss,
            self.g2,
            self.jitter,
            self.purcell_x,
            self.purcell_xx,
            0.0,
        )?;
        Ok(RelayChain::uniform(depth, &source, &self.link, self.filter)?
            .with_pairing(self.pairing)
            .with_noise_policy(self.noise))
    }
}

/// One sweep axis: a parameter and its inclusive lattice of values.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub values: Vec<f64>,
}

impl Axis {
    fn new(param: AxisParam, min: f64, max: f64, grid: usize) -> Axis {
        let values = if grid == 1 {
            vec![min]
        } else {
            (0..grid)
                .map(|i| min + (max - min) * i as f64 / (grid - 1) as f64)
                .collect()
        };
        Axis { param, values }
    }
}

/// A fully resolved sweep: fixed template, two materialized axes, depths.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub preset: PresetName,
    pub axis1: Axis,
    pub axis2: Axis,
    pub depths: Vec<usize>,
    pub template: ChainTemplate,
}

/// Locks the published parameter choices of the figure presets onto the
/// document: common S = 0.05 µeV; fig2b couples P_XX = 7·P_X through the
/// axis; fig2c fixes P_X = 2, P_XX = 10 and sweeps the filter width.
pub fn apply_preset(doc: &mut ConfigDoc, preset: PresetName) {
    doc.sweep.preset = preset;
    if preset == PresetName::Custom {
        return;
    }
    doc.source.fss = 0.05;
    doc.source.g2 = 0.0;
    doc.sweep.depths = vec![1, 2, 3];
    doc.sweep.axis2_param = Some(AxisParam::Jitter);
    doc.sweep.axis2_min = 0.0;
    doc.sweep.axis2_max = 2.4;
    match preset {
        PresetName::Fig2a => {
            doc.filter.fwhm = None;
            doc.sweep.axis1_param = Some(AxisParam::Purcell);
            doc.sweep.axis1_min = 1.0;
            doc.sweep.axis1_max = 15.0;
        }
        PresetName::Fig2b => {
            doc.filter.fwhm = None;
            doc.sweep.axis1_param = Some(AxisParam::PurcellSelective);
            doc.sweep.axis1_min = 1.0;
            doc.sweep.axis1_max = 15.0;
        }
        PresetName::Fig2c => {
            doc.source.purcell_x = 2.0;
            doc.source.purcell_xx = 10.0;
            doc.filter.center = 0.0;
            doc.sweep.axis1_param = Some(AxisParam::FilterFwhm);
            doc.sweep.axis1_min = 1.0;
            doc.sweep.axis1_max = 13.0;
        }
        PresetName::Custom => unreachable!(),
    }
}

/// Resolves a validated document into a runnable sweep. `grid_override`
/// comes from the command line.
pub fn resolve_sweep(doc: &ConfigDoc, grid_override: Option<usize>) -> Result<SweepSpec> {
    let mut doc = doc.clone();
    let preset = doc.sweep.preset;
    if preset != PresetName::Custom {
        apply_preset(&mut doc, preset);
    }
    let grid = grid_override.unwrap_or(doc.sweep.grid);
    if grid == 0 || grid > 4096 {
        return Err(Error::Config(format!("grid = {grid} out of range (1..=4096)")));
    }
    let a1 = doc
        .sweep
        .axis1_param
        .ok_or_else(|| Error::Config("sweep.axis1_param is required for a custom sweep".into()))?;
    let a2 = doc
        .sweep
        .axis2_param
        .ok_or_else(|| Error::Config("sweep.axis2_param is required for a custom sweep".into()))?;
    let template = resolve_template(&doc)?;
    Ok(SweepSpec {
        preset: doc.sweep.preset,
        axis1: Axis::new(a1, doc.sweep.axis1_min, doc.sweep.axis1_max, grid),
        axis2: Axis::new(a2, doc.sweep.axis2_min, doc.sweep.axis2_max, grid),
        depths: doc.sweep.depths.clone(),
        template,
    })
}

/// The fixed-point template of the document (what `point` evaluates and
/// what each sweep cell starts from).
pub fn resolve_template(doc: &ConfigDoc) -> Result<ChainTemplate> {
    let s = &doc.source;
    let f = &doc.fiber;
    let filter = match doc.filter.fwhm {
        Some(w) => Some(FilterSpec::new(w, doc.filter.center)?),
        None => None,
    };
    Ok(ChainTemplate {
        fss: s.fss,
        g2: s.g2,
        jitter: s.jitter,
        purcell_x: s.purcell_x,
        purcell_xx: s.purcell_xx,
        link: FiberLink::new(
            f.length_km,
            f.attenuation_db_per_km,
            f.pmd_coeff,
            f.alignment.into(),
        )?,
        filter,
        pairing: doc.sweep.pairing.into(),
        noise: doc.sweep.noise.into(),
        rate: RateParams::new(s.excitation_rate_hz, s.pair_generation, s.extraction)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_sections_get_defaults() {
        let doc = parse_config("[source]\n").unwrap();
        assert_eq!(doc, ConfigDoc::default());
        assert_eq!(doc.source.fss, 0.0);
        assert_eq!(doc.source.excitation_rate_hz, 80e6);
        assert_eq!(doc.fiber.attenuation_db_per_km, 0.2);
        assert_eq!(doc.fiber.pmd_coeff, 0.1);
        assert_eq!(doc.filter.fwhm, None);
        assert_eq!(doc.sweep.grid, 25);
        assert_eq!(doc.sweep.depths, vec![1, 2, 3]);
        // The default lifetimes are the P = 1 anchors.
        let t = resolve_template(&doc).unwrap();
        let src = QdSource::new(t.fss, t.g2, t.jitter, t.purcell_x, t.purcell_xx, 0.0).unwrap();
        assert_abs_diff_eq!(src.t1_x(), 270.0);
        assert_abs_diff_eq!(src.t1_xx(), 120.0);
        assert_abs_diff_eq!(crate::HBAR / src.t1_x(), 2.438, epsilon = 1e-3);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config("[source]\npurcel_x = 2.0\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("purcel_x"), "{msg}");
        assert!(matches!(err, Error::Config(_)));
        assert_eq!(err.exit_code(), 2);

        let err = parse_config("[sources]\nfss = 1.0\n").unwrap_err();
        assert!(err.to_string().contains("sources"), "{err}");
    }

    #[test]
    fn out_of_range_values_are_named() {
        for (text, key) in [
            ("[source]\ng2 = 1.5\n", "source.g2"),
            ("[source]\npurcell_x = 0.5\n", "source.purcell_x"),
            ("[source]\njitter = -1.0\n", "source.jitter"),
            ("[fiber]\nlength_km = -3.0\n", "fiber.length_km"),
            ("[filter]\nfwhm = 0.0\n", "filter.fwhm"),
            ("[sweep]\ngrid = 0\n", "sweep.grid"),
            ("[sweep]\ndepths = [25]\n", "25"),
        ] {
            let err = parse_config(text).unwrap_err();
            assert!(err.to_string().contains(key), "{key}: {err}");
            assert_eq!(err.exit_code(), 2, "{key}");
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let text = r#"
[source]
fss = 0.4
jitter = 0.8
purcell_x = 2.0
purcell_xx = 10.0

[fiber]
length_km = 12.5
alignment = "aligned_equal"

[filter]
fwhm = 4.0

[sweep]
preset = "custom"
axis1_param = "filter_fwhm"
axis1_min = 1.0
axis1_max = 13.0
axis2_param = "jitter"
axis2_min = 0.0
axis2_max = 2.4
grid = 7
depths = [0, 1, 2]
"#;
        let doc = parse_config(text).unwrap();
        let round = parse_config(&serialize_config(&doc).unwrap()).unwrap();
        assert_eq!(doc, round);
    }

    #[test]
    fn presets_lock_published_values() {
        let mut doc = parse_config("[source]\nfss = 3.0\ng2 = 0.4\n").unwrap();
        apply_preset(&mut doc, PresetName::Fig2c);
        assert_eq!(doc.source.fss, 0.05);
        assert_eq!(doc.source.g2, 0.0);
        assert_eq!(doc.source.purcell_x, 2.0);
        assert_eq!(doc.source.purcell_xx, 10.0);
        assert_eq!(doc.sweep.depths, vec![1, 2, 3]);

        let spec = resolve_sweep(&doc, None).unwrap();
        assert_eq!(spec.axis1.values.len(), 25);
        assert_eq!(spec.axis2.values.len(), 25);
        // The published anchor cell (δE_f = 4 µeV, δE = 0.2 µeV) sits on the
        // default lattice exactly.
        assert!(spec.axis1.values.iter().any(|&v| (v - 4.0).abs() < 1e-12));
        assert!(spec.axis2.values.iter().any(|&v| (v - 0.2).abs() < 1e-12));

        let mut doc2 = ConfigDoc::default();
        apply_preset(&mut doc2, PresetName::Fig2b);
        let spec2 = resolve_sweep(&doc2, Some(5)).unwrap();
        assert_eq!(spec2.axis1.values.len(), 5);
        assert_eq!(spec2.axis1.param, AxisParam::PurcellSelective);
        let t = spec2.template.with_axis(AxisParam::PurcellSelective, 2.0).unwrap();
        assert_eq!(t.purcell_x, 2.0);
        assert_eq!(t.purcell_xx, 14.0);
    }

    #[test]
    fn custom_sweep_requires_axes() {
        let doc = parse_config("[sweep]\npreset = \"custom\"\n").unwrap();
        let err = resolve_sweep(&doc, None).unwrap_err();
        assert!(err.to_string().contains("axis1_param"), "{err}");
    }

    #[test]
    fn axis_lattice_is_inclusive() {
        let a = Axis::new(AxisParam::Jitter, 0.0, 2.4, 25);
        assert_eq!(a.values.len(), 25);
        assert_abs_diff_eq!(a.values[0], 0.0);
        assert_abs_diff_eq!(a.values[24], 2.4);
        assert_abs_diff_eq!(a.values[2], 0.2, epsilon = 1e-12);
        let single = Axis::new(AxisParam::Fss, 0.7, 0.7, 1);
        assert_eq!(single.values, vec![0.7]);
    }
}
