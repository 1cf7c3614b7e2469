//! Single-photon temporal density matrices obtained by tracing the partner
//! photon out of a joint amplitude.
//!
//! Convention: matrix entries absorb the quadrature weight, m = δ²·(raw
//! contraction). With that folding `trace` is a plain diagonal sum, `purity`
//! a plain Σ|m|², and matrix products need no extra weights.

use crate::error::{Error, Result};
use crate::numerics::TimeGrid;
use num_complex::Complex64;
use rayon::prelude::*;

use super::joint::{JointAmplitude, Photon};

/// Hermitian, unit-trace, positive semidefinite matrix over one photon's
/// time lattice (quadrature weight folded in; see module docs).
#[derive(Clone, Debug)]
pub struct TemporalDensity {
    grid: TimeGrid,
    matrix: Vec<Complex64>,
    n: usize,
}

impl TemporalDensity {
    /// Wraps an explicit matrix (row-major n×n over `grid`'s nodes, weights
    /// already folded in). Checks Hermiticity and unit trace; positivity is
    /// the caller's responsibility (see [`TemporalDensity::validate`]).
    pub fn from_matrix(grid: TimeGrid, matrix: Vec<Complex64>) -> Result<Self> {
        let n = grid.n_points();
        if matrix.len() != n * n {
            return Err(Error::Contract(format!(
                "matrix has {} entries, grid needs {}",
                matrix.len(),
                n * n
            )));
        }
        let d = TemporalDensity { grid, matrix, n };
        d.check_hermitian_trace()?;
        Ok(d)
    }

    /// Rank-one density |b⟩⟨b| of a normalized packet sampled on `grid`'s
    /// nodes. The packet is renormalized on the lattice.
    pub fn from_pure(grid: TimeGrid, packet: impl Fn(f64) -> Complex64) -> Result<Self> {
        let n = grid.n_points();
        let w = grid.spacing();
        let samples: Vec<Complex64> = grid.nodes().into_iter().map(&packet).collect();
        let norm: f64 = samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * w;
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain(format!(
                "packet norm on the lattice must be positive and finite, got {norm}"
            )));
        }
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                matrix[i * n + j] = samples[i] * samples[j].conj() * (w / norm);
            }
        }
        Ok(TemporalDensity { grid, matrix, n })
    }

    /// Maximally mixed state on the lattice: diag(1/n).
    pub fn maximally_mixed(grid: TimeGrid) -> Self {
        let n = grid.n_points();
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            matrix[i * n + i] = Complex64::new(1.0 / n as f64, 0.0);
        }
        TemporalDensity { grid, matrix, n }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    /// Row-major entries with quadrature weight folded in.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.matrix[i * self.n + i].re).sum()
    }

    /// Tr ρ² = Σ|m|²; 1 for pure states, 1/n for maximally mixed.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|m| m.norm_sqr()).sum()
    }

    fn check_hermitian_trace(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in i..n {
                let a = self.matrix[i * n + j];
                let b = self.matrix[j * n + i].conj();
                if (a - b).norm() > 1e-12 {
                    return Err(Error::Contract(format!(
                        "density not Hermitian at ({i},{j}): {a} vs conj {b}"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::Contract(format!("density trace {tr} ≠ 1")));
        }
        Ok(())
    }

    /// Full invariant check: Hermitian (1e-12), unit trace (1e-9), and
    /// positive semidefinite (shifted Cholesky: m + 1.1e-9·I must factor).
    /// O(n³); meant for spot checks and tests, not hot paths.
    pub fn validate(&self) -> Result<()> {
        self.check_hermitian_trace()?;
        let n = self.n;
        let mut l = self.matrix.clone();
        for i in 0..n {
            l[i * n + i] += 1.1e-9;
        }
        // in-place lower Cholesky; failure of a pivot ⇒ an eigenvalue < −1.1e-9
        for k in 0..n {
            let mut d = l[k * n + k].re;
            for p in 0..k {
                d -= l[k * n + p].norm_sqr();
            }
            if d <= 0.0 {
                return Err(Error::Contract(format!(
                    "density has an eigenvalue below −1.1e-9 (pivot {k}: {d:.3e})"
                )));
            }
            let dk = d.sqrt();
            for i in (k + 1)..n {
                let mut s = l[i * n + k];
                for p in 0..k {
                    s -= l[i * n + p] * l[k * n + p].conj();
                }
                l[i * n + k] = s / dk;
            }
            l[k * n + k] = Complex64::new(dk, 0.0);
        }
        Ok(())
    }
}

/// Gram matrix of real row vectors: out[r*n+c] = scale·⟨row_r, row_c⟩ for the
/// upper triangle, mirrored below. Rows are contiguous slices of length
/// `len` in `rows`. Register-tiled (4×2 accumulator block) so the reduction
/// does not serialize on a single dependency chain; parallel over 4-row
/// output bands, deterministic regardless of thread count.
fn gram_real(rows: &[f64], n: usize, len: usize, scale: f64, out: &mut [Complex64]) {
    out.par_chunks_mut(4 * n)
        .enumerate()
        .for_each(|(band, chunk)| {
            let r0 = band * 4;
            let rb = (n - r0).min(4);
            for c0 in (r0..n).step_by(2) {
                let cb = (n - c0).min(2);
                let mut acc = [[0.0f64; 2]; 4];
                for a in 0..rb {
                    let ra = &rows[(r0 + a) * len..(r0 + a) * len + len];
                    for b in 0..cb {
                        let rc = &rows[(c0 + b) * len..(c0 + b) * len + len];
                        let mut s0 = 0.0;
                        let mut s1 = 0.0;
                        let mut s2 = 0.0;
                        let mut s3 = 0.0;
                        let mut k = 0;
                        while k + 4 <= len {
                            s0 += ra[k] * rc[k];
                            s1 += ra[k + 1] * rc[k + 1];
                            s2 += ra[k + 2] * rc[k + 2];
                            s3 += ra[k + 3] * rc[k + 3];
                            k += 4;
                        }
                        while k < len {
                            s0 += ra[k] * rc[k];
                            k += 1;
                        }
                        acc[a][b] = (s0 + s1) + (s2 + s3);
                    }
                }
                for a in 0..rb {
                    for b in 0..cb {
                        if c0 + b >= r0 + a {
                            chunk[a * n + (c0 + b)] = Complex64::new(scale * acc[a][b], 0.0);
                        }
                    }
                }
            }
        });
    // mirror the strict lower triangle
    for r in 0..n {
        for c in 0..r {
            out[r * n + c] = out[c * n + r].conj();
        }
    }
}

/// Complex Gram: out[r*n+c] = scale·Σ_k rows_r[k]·conj(rows_c[k]), upper
/// triangle computed, mirrored below.
fn gram_complex(rows: &[Complex64], n: usize, len: usize, scale: f64, out: &mut [Complex64]) {
    out.par_chunks_mut(4 * n)
        .enumerate()
        .for_each(|(band, chunk)| {
            let r0 = band * 4;
            let rb = (n - r0).min(4);
            for a in 0..rb {
                let r = r0 + a;
                let ra = &rows[r * len..r * len + len];
                for c in r..n {
                    let rc = &rows[c * len..c * len + len];
                    let mut re0 = 0.0;
                    let mut im0 = 0.0;
                    let mut re1 = 0.0;
                    let mut im1 = 0.0;
                    let mut k = 0;
                    while k + 2 <= len {
                        let (x, y) = (ra[k], rc[k]);
                        re0 += x.re * y.re + x.im * y.im;
                        im0 += x.im * y.re - x.re * y.im;
                        let (x, y) = (ra[k + 1], rc[k + 1]);
                        re1 += x.re * y.re + x.im * y.im;
                        im1 += x.im * y.re - x.re * y.im;
                        k += 2;
                    }
                    while k < len {
                        let (x, y) = (ra[k], rc[k]);
                        re0 += x.re * y.re + x.im * y.im;
                        im0 += x.im * y.re - x.re * y.im;
                        k += 1;
                    }
                    chunk[a * n + c] =
                        Complex64::new(scale * (re0 + re1), scale * (im0 + im1));
                }
            }
        });
    for r in 0..n {
        for c in 0..r {
            out[r * n + c] = out[c * n + r].conj();
        }
    }
}

/// Reduced density matrix of one photon: ρ(t, t') = δ·Σ_partner ψ·ψ̄, with
/// the folded convention m = δ²·contraction. Trace is exactly the squared
/// norm of the amplitude (= 1 after construction).
pub fn reduced_density(joint: &JointAmplitude, keep: Photon) -> TemporalDensity {
    let n = joint.n_points();
    let step = joint.step();
    let vals = joint.values();
    let scale = step * step;
    // rows of the contraction: row r = ψ(·) with the kept index fixed at r
    let all_real = vals.iter().all(|v| v.im == 0.0);
    let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
    match keep {
        Photon::Xx => {
            // rows are contiguous already: row i over j
            if all_real {
                let rows: Vec<f64> = vals.iter().map(|v| v.re).collect();
                gram_real(&rows, n, n, scale, &mut matrix);
            } else {
                gram_complex(vals, n, n, scale, &mut matrix);
            }
        }
        Photon::X => {
            // transpose so row j runs over i contiguously
            if all_real {
                let mut rows = vec![0.0f64; n * n];
                for i in 0..n {
                    for j in 0..n {
                        rows[j * n + i] = vals[i * n + j].re;
                    }
                }
                gram_real(&rows, n, n, scale, &mut matrix);
            } else {
                let mut rows = vec![Complex64::new(0.0, 0.0); n * n];
                for i in 0..n {
                    for j in 0..n {
                        rows[j * n + i] = vals[i * n + j];
                    }
                }
                gram_complex(&rows, n, n, scale, &mut matrix);
            }
        }
    }
    TemporalDensity {
        grid: *joint.axis(keep),
        matrix,
        n,
    }
}
