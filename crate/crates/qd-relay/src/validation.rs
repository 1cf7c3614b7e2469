//! Self-check suite behind the `validate` subcommand: re-derives the
//! published anchor values, cross-checks closed forms against the grid
//! numerics, and writes a plain-text report including the documented
//! model findings (convention choices, literal-evaluation discrepancies).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{
    bsm_swap, chain_fidelity, concurrence, fidelity_to_bell, source_pair_state, FiberLink,
    QdSource, RelayChain, TwoQubitState,
};
use crate::error::Result;
use crate::formulas::{
    fidelity_max, fidelity_pmd, visibility_cascade, visibility_jitter, visibility_jitter_with,
    JitterConvention, SourceSpectral,
};
use crate::numerics::{faddeeva_w, TimeGrid};
use crate::sweep::{apply_preset, resolve_sweep, run_sweep, to_csv, ConfigDoc, PresetName};
use crate::wavepacket::{
    cascade_joint_amplitude, mode_overlap, reduced_density, FilterSpec, Photon, TemporalDensity,
};

/// One check: name, outcome, and the measured numbers behind it.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the whole suite plus the standing model findings.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    pub findings: Vec<String>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Full plain-text report (also what `validation_report.txt` holds).
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "validation suite — {} checks", self.checks.len());
        let _ = writeln!(s);
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] {} — {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "result: {}",
            if self.all_passed() {
                "all checks passed"
            } else {
                "FAILURES PRESENT"
            }
        );
        let _ = writeln!(s);
        let _ = writeln!(s, "findings (documented, not failures):");
        for f in &self.findings {
            let _ = writeln!(s, "  - {f}");
        }
        s
    }
}

fn push(report: &mut ValidationReport, name: &'static str, passed: bool, detail: String) {
    report.checks.push(CheckResult { name, passed, detail });
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn check_closed_form_fidelity(r: &mut ValidationReport) -> Result<()> {
    let fss = SourceSpectral::new(0.4, 270.0, 120.0, 0.0, 0.0)?;
    let f1 = fidelity_max(&fss);
    let g2 = SourceSpectral::new(0.0, 270.0, 120.0, 8e-5, 0.0)?;
    let f2 = fidelity_max(&g2);
    push(
        r,
        "source fidelity ceiling (FSS and multi-photon anchors)",
        near(f1, 0.993402, 1e-6) && near(f2, 0.99994, 1e-6),
        format!("f(S=0.4 µeV) = {f1:.6} (want 0.993402 ± 1e-6); f(g2=8e-5) = {f2:.6} (want 0.99994 ± 1e-6)"),
    );
    Ok(())
}

fn check_pmd(r: &mut ValidationReport) -> Result<()> {
    let f120 = fidelity_pmd(2.8284, 120.0)?;
    let f1 = fidelity_pmd(2.8284, 1.0)?;
    let f10 = fidelity_pmd(2.8284, 10.0)?;
    push(
        r,
        "fiber dephasing anchors (τ = 2D√l = 2.83 ps)",
        f120 > 0.99 && near(f1, 0.7935, 0.005) && near(f10, 0.9954, 1e-3),
        format!("f(T1=120 ps) = {f120:.6} (> 0.99); f(T1=1 ps) = {f1:.6} (want 0.7935 ± 0.005); f(T1=10 ps) = {f10:.4} (literal evaluation)"),
    );
    r.findings.push(format!(
        "The literal dephasing formula gives f = {f10:.4} at T1 = 10 ps, τ = 2.83 ps; \
         the figure quoted alongside it elsewhere is \"about 0.98\". The formula is \
         implemented literally; no tuning toward 0.98 is applied."
    ));
    Ok(())
}

fn check_cascade(r: &mut ValidationReport) -> Result<()> {
    let v = visibility_cascade(120.0, 270.0)?;
    let anchor_ok = near(v, 0.6923, 1e-4);

    // Grid oracle: the cascade's reduced single-photon purity must equal the
    // closed form for random lifetime pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pairs: Vec<(f64, f64)> = vec![(40.0, 200.0), (200.0, 40.0)];
    for _ in 0..4 {
        pairs.push((rng.gen_range(40.0..200.0), rng.gen_range(40.0..200.0)));
    }
    let mut worst = 0.0f64;
    for &(t1_xx, t1_x) in &pairs {
        let grid = TimeGrid::for_lifetime(t1_x.max(t1_xx), 768)?;
        let joint = cascade_joint_amplitude(t1_xx, t1_x, &grid)?;
        let expect = visibility_cascade(t1_xx, t1_x)?;
        for photon in [Photon::Xx, Photon::X] {
            let purity = reduced_density(&joint, photon).purity();
            worst = worst.max((purity - expect).abs());
        }
    }
    push(
        r,
        "cascade visibility ceiling and grid purity oracle",
        anchor_ok && worst < 1e-3,
        format!("V(120, 270) = {v:.4} (want 0.6923 ± 1e-4); worst |purity − closed form| over {} lifetime pairs up to ratio 5 = {worst:.2e} (< 1e-3)", pairs.len()),
    );
    Ok(())
}

fn check_jitter(r: &mut ValidationReport) -> Result<()> {
    let unity = visibility_jitter(0.0, 270.0)? == 1.0;

    // Faddeeva identities: w(0) = 1, the reflection w(−conj z) = conj w(z),
    // and the pure-imaginary line w(iy) = erfcx(y).
    let mut fad_ok = true;
    let w0 = faddeeva_w(Complex64::new(0.0, 0.0))?;
    fad_ok &= (w0 - Complex64::new(1.0, 0.0)).norm() < 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..3.0));
        let lhs = faddeeva_w(Complex64::new(-z.re, z.im))?;
        let rhs = faddeeva_w(z)?.conj();
        fad_ok &= (lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm());
    }

    // Time-domain oracle: jitter-averaged overlap of two exponential packets
    // against the closed form in the angular-σ convention.
    let t1: f64 = 270.0;
    let grid = TimeGrid::new(0.0, 8100.0, 2048)?;
    let gamma: f64 = 1.0 / (2.0 * t1);
    let rho = TemporalDensity::from_pure(grid, |t| {
        Complex64::new((2.0 * gamma).sqrt() * (-gamma * t).exp(), 0.0)
    })?;
    let mut quad_worst = 0.0f64;
    for fwhm in [0.5, 1.0, 2.0] {
        let numeric = mode_overlap(&rho, &rho, fwhm, 0.0, 0.0)?;
        let closed = visibility_jitter_with(fwhm, t1, JitterConvention::Angular)?;
        quad_worst = quad_worst.max((numeric - closed).abs());
    }

    push(
        r,
        "jitter visibility: exact unity, Faddeeva identities, quadrature oracle",
        unity && fad_ok && quad_worst < 1e-3,
        format!("V(δE=0) = 1 exactly: {unity}; Faddeeva identities to 1e-10: {fad_ok}; worst |overlap − closed form| = {quad_worst:.2e} (< 1e-3, angular-σ convention)"),
    );

    let printed = visibility_jitter(4.0, 270.0)?;
    let angular = visibility_jitter_with(4.0, 270.0, JitterConvention::Angular)?;
    r.findings.push(format!(
        "σ-convention: the jitter visibility as printed reads the Gaussian σ in \
         ordinary-frequency units, y = ħ/(2π√2 σT1); the time-domain wave-packet \
         overlap reproduces the angular-units variant y = ħ/(√2 σT1) instead. Both \
         are provided; the printed (cyclic) form is the default. At δE = 4 µeV, \
         T1 = 270 ps: printed form = {printed:.4}, angular form = {angular:.4}."
    ));
    r.findings.push(format!(
        "Remote-source interference: the measured two-source visibility 0.51(5) at \
         δE ≈ 4 µeV sits well above the printed-form value {printed:.4}; both are \
         recorded here and agreement is not forced."
    ));
    Ok(())
}

fn check_swap(r: &mut ValidationReport) -> Result<()> {
    let bell = TwoQubitState::bell_phi_plus();
    let (ideal, p_ideal) = bsm_swap(&bell, &bell, 1.0)?;
    let f_ideal = fidelity_to_bell(&ideal);

    let (floor, _) = bsm_swap(&bell, &bell, 0.0)?;
    let f_floor = fidelity_to_bell(&floor);

    let w95 = TwoQubitState::werner((4.0 * 0.95 - 1.0) / 3.0)?;
    let (ww, _) = bsm_swap(&w95, &w95, 1.0)?;
    let f_w = fidelity_to_bell(&ww);
    let conc = concurrence(&ww);

    push(
        r,
        "swap composition (ideal, noise floor, Werner square)",
        near(f_ideal, 1.0, 1e-12)
            && near(p_ideal, 0.5, 1e-12)
            && near(f_floor, 0.25, 1e-12)
            && near(f_w, 0.90333, 1e-5)
            && conc > 0.0,
        format!("ideal swap fidelity = {f_ideal:.12} at p = {p_ideal:.3}; M = 0 floor = {f_floor:.4}; Werner(0.95)² = {f_w:.6} (want 0.90333 ± 1e-5)"),
    );
    Ok(())
}

fn fig2c_source(jitter: f64) -> Result<QdSource> {
    QdSource::new(0.05, 0.0, jitter, 2.0, 10.0, 0.0)
}

fn fig2c_chain(depth: usize, jitter: f64, filter_fwhm: f64) -> Result<RelayChain> {
    RelayChain::uniform(
        depth,
        &fig2c_source(jitter)?,
        &FiberLink::with_length(0.0)?,
        Some(FilterSpec::new(filter_fwhm, 0.0)?),
    )
}

fn check_chain_endpoints(r: &mut ValidationReport) -> Result<()> {
    let f2 = chain_fidelity(&fig2c_chain(2, 0.2, 4.0)?)?.fidelity;
    let f3 = chain_fidelity(&fig2c_chain(3, 0.2, 4.0)?)?.fidelity;
    push(
        r,
        "relay-chain endpoints (δE = 0.2 µeV, δE_f = 4 µeV, P_X = 2, P_XX = 10)",
        near(f2, 0.93, 0.05) && near(f3, 0.85, 0.05),
        format!("F(L=2) = {f2:.6} (want 0.93 ± 0.05); F(L=3) = {f3:.6} (want 0.85 ± 0.05)"),
    );
    Ok(())
}

fn check_shapes(r: &mut ValidationReport) -> Result<()> {
    // Non-increasing in depth and in jitter.
    let f: Vec<f64> = (1..=3)
        .map(|d| Ok(chain_fidelity(&fig2c_chain(d, 0.2, 4.0)?)?.fidelity))
        .collect::<Result<_>>()?;
    let depth_mono = f[0] >= f[1] && f[1] >= f[2];
    let j: Vec<f64> = [0.0, 0.4, 0.8, 1.6]
        .iter()
        .map(|&de| Ok(chain_fidelity(&fig2c_chain(2, de, 4.0)?)?.fidelity))
        .collect::<Result<_>>()?;
    let jitter_mono = j.windows(2).all(|w| w[0] >= w[1] - 1e-12);

    // Interior optimum along the filter axis at δE = 0.2.
    let widths: Vec<f64> = (0..13).map(|i| 1.0 + i as f64).collect();
    let row: Vec<f64> = widths
        .iter()
        .map(|&w| Ok(chain_fidelity(&fig2c_chain(2, 0.2, w)?)?.fidelity))
        .collect::<Result<_>>()?;
    let argmax = row
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .expect("non-empty")
        .0;
    let interior = argmax > 0 && argmax + 1 < row.len();
    let unimodal = row[..argmax].windows(2).all(|w| w[0] <= w[1] + 1e-12)
        && row[argmax..].windows(2).all(|w| w[0] >= w[1] - 1e-12);

    // Selective Purcell enhancement beats uniform enhancement.
    let uni = QdSource::new(0.05, 0.0, 1.2, 8.0, 8.0, 0.0)?;
    let sel = QdSource::new(0.05, 0.0, 1.2, 8.0, 56.0, 0.0)?;
    let link = FiberLink::with_length(0.0)?;
    let f_uni = chain_fidelity(&RelayChain::uniform(2, &uni, &link, None)?)?.fidelity;
    let f_sel = chain_fidelity(&RelayChain::uniform(2, &sel, &link, None)?)?.fidelity;

    push(
        r,
        "map shapes (depth/jitter monotone, interior filter optimum, selective ≥ uniform)",
        depth_mono && jitter_mono && interior && unimodal && f_sel >= f_uni,
        format!(
            "depth monotone: {depth_mono}; jitter monotone: {jitter_mono}; filter optimum at δE_f = {} µeV (interior: {interior}, unimodal: {unimodal}); selective {f_sel:.4} ≥ uniform {f_uni:.4}",
            widths[argmax]
        ),
    );
    Ok(())
}

fn check_state_validity(r: &mut ValidationReport) -> Result<()> {
    // Every constructor re-validates Hermiticity/trace/positivity, so it is
    // enough to drive a spread of chains through and re-check the finals.
    let mut worst_herm = 0.0f64;
    let mut worst_trace = 0.0f64;
    let mut count = 0usize;
    for depth in [0usize, 1, 2] {
        for jitter in [0.0, 0.8] {
            let out = chain_fidelity(&fig2c_chain(depth, jitter, 4.0)?)?;
            let m = out.final_state.matrix();
            for i in 0..4 {
                for j in 0..4 {
                    worst_herm = worst_herm.max((m[i * 4 + j] - m[j * 4 + i].conj()).norm());
                }
            }
            let tr: f64 = (0..4).map(|i| m[i * 4 + i].re).sum();
            worst_trace = worst_trace.max((tr - 1.0).abs());
            count += 1;
        }
    }
    push(
        r,
        "state validity across chain outputs",
        worst_herm <= 1e-12 && worst_trace <= 1e-9,
        format!("{count} final states: worst Hermiticity defect = {worst_herm:.2e} (≤ 1e-12), worst trace defect = {worst_trace:.2e} (≤ 1e-9); positivity enforced at construction"),
    );

    // The density-matrix path and the closed form agree for random sources.
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let fss = rng.gen_range(0.0..2.0);
        let g2 = rng.gen_range(0.0..0.2);
        let p_x = rng.gen_range(1.0..12.0);
        let q = QdSource::new(fss, g2, 0.0, p_x, rng.gen_range(1.0..12.0), 0.0)?;
        let by_state = fidelity_to_bell(&source_pair_state(&q));
        let by_formula = fidelity_max(q.spectral());
        worst = worst.max((by_state - by_formula).abs());
    }
    push(
        r,
        "pair-state fidelity equals the closed form (100 random sources)",
        worst <= 1e-9,
        format!("worst |density-matrix path − closed form| = {worst:.2e} (≤ 1e-9)"),
    );
    Ok(())
}

fn check_determinism(r: &mut ValidationReport) -> Result<()> {
    let mut doc = ConfigDoc::default();
    apply_preset(&mut doc, PresetName::Fig2c);
    let spec = resolve_sweep(&doc, Some(5))?;
    let ambient = to_csv(&run_sweep(&spec)?);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("local rayon pool");
    let serial = pool.install(|| -> Result<String> { Ok(to_csv(&run_sweep(&spec)?)) })?;
    let again = to_csv(&run_sweep(&spec)?);
    push(
        r,
        "sweep determinism across thread counts",
        ambient == serial && ambient == again,
        format!(
            "5×5×3 preset sweep: ambient pool vs 1-thread pool byte-identical: {}; repeated run byte-identical: {}",
            ambient == serial,
            ambient == again
        ),
    );
    Ok(())
}

/// Runs every check and returns the report.
pub fn run_validation() -> Result<ValidationReport> {
    let mut r = ValidationReport::default();
    check_closed_form_fidelity(&mut r)?;
    check_pmd(&mut r)?;
    check_cascade(&mut r)?;
    check_jitter(&mut r)?;
    check_swap(&mut r)?;
    check_chain_endpoints(&mut r)?;
    check_shapes(&mut r)?;
    check_state_validity(&mut r)?;
    check_determinism(&mut r)?;
    Ok(r)
}

/// Writes `validation_report.txt` into `out_dir` and returns its path.
pub fn write_report(report: &ValidationReport, out_dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join("validation_report.txt");
    fs::write(&path, report.render())?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_reports_findings() {
        let report = run_validation().unwrap();
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(report.checks.len(), 10);
        assert!(report.findings.len() >= 3);
        let text = report.render();
        assert!(text.contains("PASS"));
        assert!(!text.contains("FAIL]"));
        assert!(text.contains("σ-convention"));
        assert!(text.contains("0.51"));
        let dir = std::env::temp_dir().join(format!("qd_relay_validate_{}", std::process::id()));
        let path = write_report(&report, &dir).unwrap();
        assert!(path.exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
