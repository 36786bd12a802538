//! Cyclic two-sided Jacobi eigensolver for complex Hermitian matrices.
//!
//! Sweeps rotate away one off-diagonal entry at a time until the total
//! off-diagonal Frobenius mass drops under `1e-13 * ||H||_F`, with a cap of
//! 100 sweeps. At desk scale (n <= 64) this converges in a handful of
//! sweeps and delivers eigenpairs accurate to close to machine precision.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, HERMITIAN_TOL};

const OFF_DIAG_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; column `j` of [`eigenvectors`] is the
/// eigenvector for `eigenvalues[j]`, and the eigenvector matrix is unitary.
///
/// [`eigenvectors`]: HermitianSpectrum::eigenvectors
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Eigenvector for the largest eigenvalue.
    pub fn top_eigenvector(&self) -> Vec<Complex64> {
        self.eigenvectors.column(self.eigenvalues.len() - 1)
    }

    /// `V diag(lambda) V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|lam| lam)
    }

    /// `V diag(f(lambda)) V*`.
    pub fn apply(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let flam = f(lam);
            if flam == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = v[(i, k)] * flam;
                for j in 0..n {
                    out[(i, j)] += vi * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// `V diag(max(lambda, 0)^exponent) V*`; tiny negative eigenvalues are
    /// numerical noise on a PSD matrix and clamp to zero.
    pub fn apply_power(&self, exponent: f64) -> ComplexMatrix {
        self.apply(|lam| lam.max(0.0).powf(exponent))
    }

    /// Same eigenvectors, eigenvalues mapped through `f` (order is
    /// re-sorted ascending afterwards).
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> HermitianSpectrum {
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut order: Vec<usize> = (0..mapped.len()).collect();
        order.sort_by(|&a, &b| mapped[a].partial_cmp(&mapped[b]).unwrap());
        let n = mapped.len();
        let eigenvalues = order.iter().map(|&k| mapped[k]).collect();
        let eigenvectors =
            ComplexMatrix::from_fn(n, n, |i, j| self.eigenvectors[(i, order[j])]);
        HermitianSpectrum {
            eigenvalues,
            eigenvectors,
        }
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be square and Hermitian within `HERMITIAN_TOL` relative
/// Frobenius deviation. Deterministic: identical input bits give identical
/// output bits.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianSpectrum, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let norm = h.frobenius_norm();
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL * norm {
        return Err(LinalgError::NotHermitian {
            deviation: dev / norm,
        });
    }

    let n = h.rows();
    let mut mat = h.entries().to_vec();
    let mut vecs = ComplexMatrix::identity(n).entries().to_vec();
    jacobi(&mut mat, n, Some(&mut vecs))?;

    // Sort ascending, permuting eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| mat[a * n + a].re.partial_cmp(&mat[b * n + b].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| mat[k * n + k].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| vecs[i * n + order[j]]);
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Largest eigenvalue of a Hermitian matrix stored in `mat` (clobbered);
/// values-only Jacobi, trusting the caller on Hermitian-ness.
pub(crate) fn max_eigenvalue_inplace(mat: &mut [Complex64], n: usize) -> Result<f64, LinalgError> {
    jacobi(mat, n, None)?;
    let mut best = mat[0].re;
    for k in 1..n {
        best = best.max(mat[k * n + k].re);
    }
    Ok(best)
}

fn off_diagonal_norm(mat: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            sum += mat[p * n + q].norm_sqr();
        }
    }
    (2.0 * sum).sqrt()
}

fn jacobi(
    mat: &mut [Complex64],
    n: usize,
    mut vecs: Option<&mut [Complex64]>,
) -> Result<(), LinalgError> {
    debug_assert_eq!(mat.len(), n * n);
    if n <= 1 {
        return Ok(());
    }
    let norm: f64 = mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(());
    }
    let target = OFF_DIAG_TOL * norm;
    // Pivots below this leave the total off-diagonal mass under the target
    // even if every entry sits at the threshold.
    let skip = target / ((n * (n - 1)) as f64).sqrt();

    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(mat, n) <= target {
            return Ok(());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = mat[p * n + q];
                let g = hpq.norm();
                if g <= skip {
                    continue;
                }
                let app = mat[p * n + p].re;
                let aqq = mat[q * n + q].re;
                let u = hpq / g;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let su = u * s;
                let su_conj = su.conj();

                // Rows p and q (skip the 2x2 pivot block, fixed below).
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let mpk = mat[p * n + k];
                    let mqk = mat[q * n + k];
                    mat[p * n + k] = mpk * c - mqk * su;
                    mat[q * n + k] = mpk * s + mqk * (u * c);
                }
                // Columns p and q.
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let mkp = mat[k * n + p];
                    let mkq = mat[k * n + q];
                    mat[k * n + p] = mkp * c - mkq * su_conj;
                    mat[k * n + q] = mkp * s + mkq * (u.conj() * c);
                }
                mat[p * n + p] = Complex64::new(app - t * g, 0.0);
                mat[q * n + q] = Complex64::new(aqq + t * g, 0.0);
                mat[p * n + q] = Complex64::ZERO;
                mat[q * n + p] = Complex64::ZERO;

                if let Some(v) = vecs.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * su_conj;
                        v[k * n + q] = vkp * s + vkq * (u.conj() * c);
                    }
                }
            }
        }
    }

    let residual = off_diagonal_norm(mat, n);
    if residual <= target {
        Ok(())
    } else {
        Err(LinalgError::NoConvergence {
            residual,
            sweeps: MAX_SWEEPS,
        })
    }
}
