//! Two-qubit polarization states in the {HH, HV, VH, VV} basis.

use crate::error::{ensure_finite, Error, Result};
use crate::formulas::pmd_kappa;
use num_complex::Complex64;

const N: usize = 4;

/// 4×4 density matrix over the polarization basis {HH, HV, VH, VV}.
/// Construction enforces Hermiticity (1e-12), unit trace (1e-9) and
/// positivity (eigenvalues ≥ −1e-9).
#[derive(Clone, Debug)]
pub struct TwoQubitState {
    m: [Complex64; 16],
}

impl TwoQubitState {
    pub fn new(m: [Complex64; 16]) -> Result<Self> {
        for (idx, v) in m.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Domain(format!("non-finite matrix entry at {idx}")));
            }
        }
        for i in 0..N {
            for j in i..N {
                if (m[i * N + j] - m[j * N + i].conj()).norm() > 1e-12 {
                    return Err(Error::Contract(format!(
                        "state not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        let trace: f64 = (0..N).map(|i| m[i * N + i].re).sum();
        if (trace - 1.0).abs() > 1e-9 {
            return Err(Error::Contract(format!("state trace {trace} ≠ 1")));
        }
        let (eig, _) = hermitian_eig4(&m);
        if eig.iter().any(|&l| l < -1e-9) {
            return Err(Error::Contract(format!(
                "state has negative eigenvalue {:.3e}",
                eig.iter().cloned().fold(f64::INFINITY, f64::min)
            )));
        }
        Ok(TwoQubitState { m })
    }

    /// |φ+⟩⟨φ+| with |φ+⟩ = (|HH⟩ + |VV⟩)/√2.
    pub fn bell_phi_plus() -> Self {
        let mut m = [Complex64::new(0.0, 0.0); 16];
        let h = Complex64::new(0.5, 0.0);
        m[0] = h;
        m[3] = h;
        m[12] = h;
        m[15] = h;
        TwoQubitState { m }
    }

    pub fn maximally_mixed() -> Self {
        let mut m = [Complex64::new(0.0, 0.0); 16];
        for i in 0..N {
            m[i * N + i] = Complex64::new(0.25, 0.0);
        }
        TwoQubitState { m }
    }

    /// Werner state p·|φ+⟩⟨φ+| + (1−p)·I/4 for p ∈ [0, 1].
    pub fn werner(p: f64) -> Result<Self> {
        ensure_finite(p, "werner p")?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("werner p must be in [0,1], got {p}")));
        }
        let bell = Self::bell_phi_plus();
        let mut m = [Complex64::new(0.0, 0.0); 16];
        for i in 0..16 {
            m[i] = p * bell.m[i];
        }
        for i in 0..N {
            m[i * N + i] += 0.25 * (1.0 - p);
        }
        Ok(TwoQubitState { m })
    }

    pub fn matrix(&self) -> &[Complex64; 16] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i * N + j]
    }

    pub fn trace(&self) -> f64 {
        (0..N).map(|i| self.m[i * N + i].re).sum()
    }

    /// Reduced state of one qubit (2×2, row-major).
    pub fn reduced(&self, keep_first: bool) -> [Complex64; 4] {
        let mut r = [Complex64::new(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    r[i * 2 + j] += if keep_first {
                        self.m[(i * 2 + k) * N + (j * 2 + k)]
                    } else {
                        self.m[(k * 2 + i) * N + (k * 2 + j)]
                    };
                }
            }
        }
        r
    }
}

/// Maximum overlap with |φ+⟩ over a local phase rotation:
/// ½(ρ_HH,HH + ρ_VV,VV) + |ρ_HH,VV|. This is the "maximum achievable"
/// fidelity convention — the phase of the HH–VV coherence is assumed
/// compensated by a local waveplate.
pub fn fidelity_to_bell(s: &TwoQubitState) -> f64 {
    let f = 0.5 * (s.m[0].re + s.m[15].re) + s.m[3].norm();
    f.clamp(0.0, 1.0)
}

/// Polarization-mode-dispersion dephasing of one photon: the HH–VV (and all
/// H–V) coherences of the first qubit shrink by
/// κ(τ) = (1 + τ/(2T1))·e^(−τ/(2T1)). Implemented as a phase-damping channel
/// on the first qubit, so positivity is preserved exactly.
pub fn apply_pmd(s: &TwoQubitState, tau: f64, t1: f64) -> Result<TwoQubitState> {
    let kappa = pmd_kappa(tau, t1)?;
    let mut m = *s.matrix();
    for i in 0..N {
        for j in 0..N {
            // first-qubit bra/ket indices differ → coherence entry
            if (i / 2) != (j / 2) {
                m[i * N + j] *= kappa;
            }
        }
    }
    TwoQubitState::new(m)
}

/// Wootters concurrence: eigenvalues μ of √(√ρ·ρ̃·√ρ) in decreasing order,
/// C = max(0, μ1 − μ2 − μ3 − μ4), with ρ̃ = (σy⊗σy)·ρ̄·(σy⊗σy).
pub fn concurrence(s: &TwoQubitState) -> f64 {
    // σy⊗σy is the anti-diagonal (−1, 1, 1, −1)
    let y = |i: usize| -> (usize, f64) {
        match i {
            0 => (3, -1.0),
            1 => (2, 1.0),
            2 => (1, 1.0),
            _ => (0, -1.0),
        }
    };
    let mut tilde = [Complex64::new(0.0, 0.0); 16];
    for i in 0..N {
        for j in 0..N {
            let (yi, si) = y(i);
            let (yj, sj) = y(j);
            tilde[i * N + j] = s.m[yi * N + yj].conj() * (si * sj);
        }
    }
    // √ρ from the eigen-decomposition (clamping rounding negatives)
    let (vals, vecs) = hermitian_eig4(&s.m);
    let mut sqrt_rho = [Complex64::new(0.0, 0.0); 16];
    for k in 0..N {
        let s_k = vals[k].max(0.0).sqrt();
        for i in 0..N {
            for j in 0..N {
                sqrt_rho[i * N + j] += vecs[i * N + k] * vecs[j * N + k].conj() * s_k;
            }
        }
    }
    let prod = mat_mul(&mat_mul(&sqrt_rho, &tilde), &sqrt_rho);
    // prod is Hermitian PSD up to rounding; symmetrize before solving
    let mut herm = [Complex64::new(0.0, 0.0); 16];
    for i in 0..N {
        for j in 0..N {
            herm[i * N + j] = 0.5 * (prod[i * N + j] + prod[j * N + i].conj());
        }
    }
    let (mut mus, _) = hermitian_eig4(&herm);
    for m in &mut mus {
        *m = m.max(0.0).sqrt();
    }
    mus.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (mus[0] - mus[1] - mus[2] - mus[3]).max(0.0)
}

fn mat_mul(a: &[Complex64; 16], b: &[Complex64; 16]) -> [Complex64; 16] {
    let mut c = [Complex64::new(0.0, 0.0); 16];
    for i in 0..N {
        for k in 0..N {
            let aik = a[i * N + k];
            for j in 0..N {
                c[i * N + j] += aik * b[k * N + j];
            }
        }
    }
    c
}

/// Cyclic complex Jacobi eigensolver for a 4×4 Hermitian matrix.
/// Returns (eigenvalues, column eigenvectors V) with A = V·diag·V†.
pub(crate) fn hermitian_eig4(a: &[Complex64; 16]) -> ([f64; 4], [Complex64; 16]) {
    let mut m = *a;
    let mut v = [Complex64::new(0.0, 0.0); 16];
    for i in 0..N {
        v[i * N + i] = Complex64::new(1.0, 0.0);
    }
    let scale: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..50 {
        let mut off = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off += m[p * N + q].norm_sqr();
            }
        }
        if off.sqrt() < 1e-15 * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = m[p * N + q];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag; // e^{iφ}
                let app = m[p * N + p].re;
                let aqq = m[q * N + q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // unitary J: J_pp = c, J_pq = s·e^{iφ}, J_qp = −s·e^{−iφ}, J_qq = c
                let jpq = s * phase;
                let jqp = -s * phase.conj();
                // A ← J† A J: columns first, then rows
                for r in 0..N {
                    let arp = m[r * N + p];
                    let arq = m[r * N + q];
                    m[r * N + p] = arp * c + arq * jqp;
                    m[r * N + q] = arp * jpq + arq * c;
                }
                for cidx in 0..N {
                    let apc = m[p * N + cidx];
                    let aqc = m[q * N + cidx];
                    m[p * N + cidx] = apc * c + aqc * jqp.conj();
                    m[q * N + cidx] = apc * jpq.conj() + aqc * c;
                }
                for r in 0..N {
                    let vrp = v[r * N + p];
                    let vrq = v[r * N + q];
                    v[r * N + p] = vrp * c + vrq * jqp;
                    v[r * N + q] = vrp * jpq + vrq * c;
                }
            }
        }
    }
    let mut vals = [0.0; 4];
    for i in 0..N {
        vals[i] = m[i * N + i].re;
    }
    (vals, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bell_state_metrics() {
        let s = TwoQubitState::bell_phi_plus();
        assert_abs_diff_eq!(fidelity_to_bell(&s), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence(&s), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s.trace(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn maximally_mixed_metrics() {
        let s = TwoQubitState::maximally_mixed();
        assert_abs_diff_eq!(fidelity_to_bell(&s), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence(&s), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn werner_identities() {
        // fidelity (3p+1)/4, concurrence max(0, (3p−1)/2)
        let p = 14.0 / 15.0;
        let s = TwoQubitState::werner(p).unwrap();
        assert_abs_diff_eq!(fidelity_to_bell(&s), (3.0 * p + 1.0) / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence(&s), 0.9, epsilon = 1e-9);
        let w9 = TwoQubitState::werner(0.9).unwrap();
        assert_abs_diff_eq!(fidelity_to_bell(&w9), 0.925, epsilon = 1e-12);
        // below the separability threshold p = 1/3 the concurrence vanishes
        let sep = TwoQubitState::werner(0.2).unwrap();
        assert_abs_diff_eq!(concurrence(&sep), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn eigensolver_recovers_spectrum() {
        // Werner spectrum: (1+3p)/4 once, (1−p)/4 three times
        let p = 0.6;
        let s = TwoQubitState::werner(p).unwrap();
        let (mut vals, vecs) = hermitian_eig4(s.matrix());
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_abs_diff_eq!(vals[0], (1.0 + 3.0 * p) / 4.0, epsilon = 1e-12);
        for v in &vals[1..] {
            assert_abs_diff_eq!(*v, (1.0 - p) / 4.0, epsilon = 1e-12);
        }
        // V must be unitary: V†V = I
        for i in 0..4 {
            for j in 0..4 {
                let mut dot = Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    dot += vecs[k * 4 + i].conj() * vecs[k * 4 + j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot.re, expect, epsilon = 1e-12);
                assert_abs_diff_eq!(dot.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pmd_matches_closed_form_fidelity() {
        use crate::formulas::fidelity_pmd;
        let bell = TwoQubitState::bell_phi_plus();
        // τ = 0 leaves the state untouched
        let same = apply_pmd(&bell, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(fidelity_to_bell(&same), 1.0, epsilon = 1e-12);
        // §2-style anchor: τ = 2.8284 ps on T1 = 1 ps
        let out = apply_pmd(&bell, 2.8284, 1.0).unwrap();
        assert_abs_diff_eq!(fidelity_to_bell(&out), 0.793470, epsilon = 1e-6);
        assert_abs_diff_eq!(
            fidelity_to_bell(&out),
            fidelity_pmd(2.8284, 1.0).unwrap(),
            epsilon = 1e-12
        );
        // τ → ∞ kills the coherence entirely
        let dead = apply_pmd(&bell, 1e6, 1.0).unwrap();
        assert_abs_diff_eq!(fidelity_to_bell(&dead), 0.5, epsilon = 1e-9);
        assert!(apply_pmd(&bell, -1.0, 1.0).is_err());
    }

    #[test]
    fn construction_rejects_bad_matrices() {
        let mut m = *TwoQubitState::bell_phi_plus().matrix();
        m[1] = Complex64::new(0.3, 0.0); // breaks Hermiticity
        assert!(TwoQubitState::new(m).is_err());
        let mut m2 = *TwoQubitState::maximally_mixed().matrix();
        m2[0] = Complex64::new(0.5, 0.0); // breaks trace
        assert!(TwoQubitState::new(m2).is_err());
        // Hermitian, trace 1, but indefinite
        let mut m3 = [Complex64::new(0.0, 0.0); 16];
        m3[0] = Complex64::new(0.5, 0.0);
        m3[5] = Complex64::new(0.5, 0.0);
        m3[3] = Complex64::new(0.45, 0.0);
        m3[12] = Complex64::new(0.45, 0.0);
        assert!(TwoQubitState::new(m3).is_err());
    }

    #[test]
    fn reduced_states_of_bell_are_mixed() {
        let s = TwoQubitState::bell_phi_plus();
        for keep_first in [true, false] {
            let r = s.reduced(keep_first);
            assert_abs_diff_eq!(r[0].re, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(r[3].re, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(r[1].norm(), 0.0, epsilon = 1e-12);
        }
    }
}
