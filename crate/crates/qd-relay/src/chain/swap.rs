//! Entanglement swapping at a Bell-state measurement that can herald the
//! two odd-parity Bell states ψ±.

use crate::error::{ensure_finite, Error, Result};
use num_complex::Complex64;

use super::state::TwoQubitState;

/// What the heralded state looks like when the two photons were
/// distinguishable (weight 1 − M). The herald then carries no which-Bell
/// information.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BsmNoisePolicy {
    /// Product of the two outer qubits' reduced states (standard
    /// distinguishable-photon limit; I/4 for symmetric sources).
    #[default]
    OuterProduct,
    /// Flat white noise I/4 regardless of the inputs.
    WhiteNoise,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// |ψ±⟩ amplitudes as a 2×2 array B[i][j] = ⟨ij|ψ±⟩.
fn bell_psi(sign: f64) -> [[Complex64; 2]; 2] {
    let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[ZERO, a], [a * sign, ZERO]]
}

/// Local correction mapping a ψ±-heralded swap output into the φ+ frame:
/// I⊗X for ψ+, I⊗(Z·X) for ψ−.
fn correction(sign: f64) -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    if sign > 0.0 {
        [[ZERO, one], [one, ZERO]] // X
    } else {
        [[ZERO, one], [-one, ZERO]] // Z·X
    }
}

/// Projects qubits 2 and 3 of ρ_a⊗ρ_b onto |B⟩⟨B| and keeps the outer pair:
/// out[i,x;j,y] = Σ conj(B[a2,c3])·B[b2,d3]·ρa[i,a2;j,b2]·ρb[c3,x;d3,y].
fn project_bell(
    a: &TwoQubitState,
    b: &TwoQubitState,
    bell: &[[Complex64; 2]; 2],
) -> [Complex64; 16] {
    let am = a.matrix();
    let bm = b.matrix();
    let mut out = [ZERO; 16];
    for i in 0..2 {
        for x in 0..2 {
            for j in 0..2 {
                for y in 0..2 {
                    let mut acc = ZERO;
                    for a2 in 0..2 {
                        for c3 in 0..2 {
                            let w1 = bell[a2][c3].conj();
                            if w1 == ZERO {
                                continue;
                            }
                            for b2 in 0..2 {
                                for d3 in 0..2 {
                                    let w2 = bell[b2][d3];
                                    if w2 == ZERO {
                                        continue;
                                    }
                                    acc += w1
                                        * w2
                                        * am[(i * 2 + a2) * 4 + (j * 2 + b2)]
                                        * bm[(c3 * 2 + x) * 4 + (d3 * 2 + y)];
                                }
                            }
                        }
                    }
                    out[(i * 2 + x) * 4 + (j * 2 + y)] = acc;
                }
            }
        }
    }
    out
}

/// (I⊗C)·ρ·(I⊗C)† on the outer pair.
fn apply_outer_correction(rho: &[Complex64; 16], c: &[[Complex64; 2]; 2]) -> [Complex64; 16] {
    let mut out = [ZERO; 16];
    for i in 0..2 {
        for x in 0..2 {
            for j in 0..2 {
                for y in 0..2 {
                    let mut acc = ZERO;
                    for xp in 0..2 {
                        for yp in 0..2 {
                            acc += c[x][xp]
                                * c[y][yp].conj()
                                * rho[(i * 2 + xp) * 4 + (j * 2 + yp)];
                        }
                    }
                    out[(i * 2 + x) * 4 + (j * 2 + y)] = acc;
                }
            }
        }
    }
    out
}

fn kron2(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 16] {
    let mut out = [ZERO; 16];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(i * 2 + k) * 4 + (j * 2 + l)] = a[i * 2 + j] * b[k * 2 + l];
                }
            }
        }
    }
    out
}

/// Entanglement swap with photon indistinguishability `m_overlap` ∈ [0, 1]:
/// with weight M the interference works and both ψ± heralds (after their
/// Pauli corrections) fold into one φ+-frame state; with weight 1 − M the
/// herald fires on distinguishable photons and yields the noise state of
/// the configured policy. Returns the normalized output and the heralding
/// probability p = M·p_ideal + (1−M)·p_noise (½ each for Bell inputs).
pub fn bsm_swap_with_policy(
    a: &TwoQubitState,
    b: &TwoQubitState,
    m_overlap: f64,
    policy: BsmNoisePolicy,
) -> Result<(TwoQubitState, f64)> {
    ensure_finite(m_overlap, "m_overlap")?;
    if !(0.0..=1.0).contains(&m_overlap) {
        return Err(Error::Domain(format!(
            "mode overlap must be in [0,1], got {m_overlap}"
        )));
    }
    let mut ideal = [ZERO; 16];
    for sign in [1.0, -1.0] {
        let projected = project_bell(a, b, &bell_psi(sign));
        let corrected = apply_outer_correction(&projected, &correction(sign));
        for (o, c) in ideal.iter_mut().zip(corrected) {
            *o += c;
        }
    }
    let p_ideal: f64 = (0..4).map(|i| ideal[i * 4 + i].re).sum();

    // distinguishable branch: the BSM still clicks when the inner photons
    // land in orthogonal polarizations (HV or VH), with no entanglement left
    let r2 = a.reduced(false); // inner qubit of a
    let r3 = b.reduced(true); // inner qubit of b
    let p_noise = (r2[0] * r3[3] + r2[3] * r3[0]).re;
    let noise = match policy {
        BsmNoisePolicy::OuterProduct => kron2(&a.reduced(true), &b.reduced(false)),
        BsmNoisePolicy::WhiteNoise => {
            let mut id = [ZERO; 16];
            for i in 0..4 {
                id[i * 4 + i] = Complex64::new(0.25, 0.0);
            }
            id
        }
    };

    let p = m_overlap * p_ideal + (1.0 - m_overlap) * p_noise;
    if p <= 0.0 {
        return Err(Error::Domain(format!(
            "herald probability vanished (p = {p}); inputs carry no HV population"
        )));
    }
    let mut out = [ZERO; 16];
    for i in 0..16 {
        out[i] = (m_overlap * ideal[i] + (1.0 - m_overlap) * p_noise * noise[i]) / p;
    }
    Ok((TwoQubitState::new(out)?, p))
}

/// [`bsm_swap_with_policy`] with the default outer-product noise model.
pub fn bsm_swap(
    a: &TwoQubitState,
    b: &TwoQubitState,
    m_overlap: f64,
) -> Result<(TwoQubitState, f64)> {
    bsm_swap_with_policy(a, b, m_overlap, BsmNoisePolicy::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::state::fidelity_to_bell;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ideal_swap_of_bell_pairs() {
        let bell = TwoQubitState::bell_phi_plus();
        let (out, p) = bsm_swap(&bell, &bell, 1.0).unwrap();
        assert_abs_diff_eq!(fidelity_to_bell(&out), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn fully_distinguishable_swap_gives_noise_floor() {
        let bell = TwoQubitState::bell_phi_plus();
        let (out, p) = bsm_swap(&bell, &bell, 0.0).unwrap();
        assert_abs_diff_eq!(fidelity_to_bell(&out), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
        // white-noise policy coincides for symmetric inputs
        let (out2, _) =
            bsm_swap_with_policy(&bell, &bell, 0.0, BsmNoisePolicy::WhiteNoise).unwrap();
        for (x, y) in out.matrix().iter().zip(out2.matrix()) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn werner_parameter_composes_quadratically() {
        // Werner(F = 0.95) ⇒ p = 14/15; ideal swap gives p² and
        // fidelity (3p² + 1)/4 = 0.90333…
        let p = 14.0 / 15.0;
        let w = TwoQubitState::werner(p).unwrap();
        let (out, prob) = bsm_swap(&w, &w, 1.0).unwrap();
        assert_abs_diff_eq!(
            fidelity_to_bell(&out),
            (3.0 * p * p + 1.0) / 4.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(fidelity_to_bell(&out), 0.90333, epsilon = 1e-5);
        assert_abs_diff_eq!(prob, 0.5, epsilon = 1e-12);
    }

    /// Brute-force oracle: build the full 16×16 product state, project
    /// qubits 2–3 on |ψ±⟩, trace them out, correct, and sum both heralds.
    fn oracle_swap(a: &TwoQubitState, b: &TwoQubitState) -> ([Complex64; 16], f64) {
        let am = a.matrix();
        let bm = b.matrix();
        // full[(q1 q2 q3 q4), (q1' q2' q3' q4')]
        let idx = |q1: usize, q2: usize, q3: usize, q4: usize| -> usize {
            ((q1 * 2 + q2) * 2 + q3) * 2 + q4
        };
        let mut full = vec![ZERO; 256];
        for q1 in 0..2 {
            for q2 in 0..2 {
                for q3 in 0..2 {
                    for q4 in 0..2 {
                        for r1 in 0..2 {
                            for r2 in 0..2 {
                                for r3 in 0..2 {
                                    for r4 in 0..2 {
                                        full[idx(q1, q2, q3, q4) * 16 + idx(r1, r2, r3, r4)] =
                                            am[(q1 * 2 + q2) * 4 + (r1 * 2 + r2)]
                                                * bm[(q3 * 2 + q4) * 4 + (r3 * 2 + r4)];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut total = [ZERO; 16];
        let mut p_total = 0.0;
        for sign in [1.0, -1.0] {
            let bell = bell_psi(sign);
            // ⟨q2 q3|ψ⟩ amplitudes
            let mut reduced = [ZERO; 16];
            for q1 in 0..2 {
                for q4 in 0..2 {
                    for r1 in 0..2 {
                        for r4 in 0..2 {
                            let mut acc = ZERO;
                            for q2 in 0..2 {
                                for q3 in 0..2 {
                                    for r2 in 0..2 {
                                        for r3 in 0..2 {
                                            acc += bell[q2][q3].conj()
                                                * bell[r2][r3]
                                                * full[idx(q1, q2, q3, q4) * 16
                                                    + idx(r1, r2, r3, r4)];
                                        }
                                    }
                                }
                            }
                            reduced[(q1 * 2 + q4) * 4 + (r1 * 2 + r4)] = acc;
                        }
                    }
                }
            }
            let corrected = apply_outer_correction(&reduced, &correction(sign));
            p_total += (0..4).map(|i| corrected[i * 4 + i].re).sum::<f64>();
            for (t, c) in total.iter_mut().zip(corrected) {
                *t += c;
            }
        }
        (total, p_total)
    }

    #[test]
    fn swap_matches_brute_force_oracle_on_random_bell_diagonal_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mk = |rng: &mut ChaCha8Rng| {
                let mut w = [0.0; 4];
                let mut tot = 0.0;
                for x in &mut w {
                    *x = rng.gen_range(0.01..1.0);
                    tot += *x;
                }
                for x in &mut w {
                    *x /= tot;
                }
                // Bell-diagonal: w0 φ+ + w1 φ− + w2 ψ+ + w3 ψ−
                let mut m = [ZERO; 16];
                let h = 0.5;
                m[0] = Complex64::new(h * (w[0] + w[1]), 0.0);
                m[15] = m[0];
                m[3] = Complex64::new(h * (w[0] - w[1]), 0.0);
                m[12] = m[3];
                m[5] = Complex64::new(h * (w[2] + w[3]), 0.0);
                m[10] = m[5];
                m[6] = Complex64::new(h * (w[2] - w[3]), 0.0);
                m[9] = m[6];
                TwoQubitState::new(m).unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let (got, p_got) = bsm_swap(&a, &b, 1.0).unwrap();
            let (want_raw, p_want) = oracle_swap(&a, &b);
            assert_abs_diff_eq!(p_got, p_want, epsilon = 1e-12);
            for (g, w) in got.matrix().iter().zip(want_raw) {
                assert_abs_diff_eq!((g - w / p_want).norm(), 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn rejects_invalid_overlap() {
        let bell = TwoQubitState::bell_phi_plus();
        assert!(bsm_swap(&bell, &bell, -0.1).is_err());
        assert!(bsm_swap(&bell, &bell, 1.1).is_err());
        assert!(bsm_swap(&bell, &bell, f64::NAN).is_err());
    }
}
