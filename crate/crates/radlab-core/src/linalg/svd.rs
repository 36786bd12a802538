//! Singular value decomposition via the Gram matrices `A*A` and `AA*`.
//!
//! Both Gram eigendecompositions are computed with the Jacobi solver; the
//! short-side singular vectors come from the corresponding Gram
//! eigenvectors, the long-side vectors from normalizing `A v_i` (which
//! also fixes the relative phases), and null directions are completed from
//! the other Gram's small-eigenvalue vectors by Gram-Schmidt.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{hermitian_eigen, inner, vec_norm, ComplexMatrix, LinalgError};

/// Compact SVD `A = U diag(sigma) V*` with `k = min(rows, cols)`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// rows x k, orthonormal columns.
    pub u: ComplexMatrix,
    /// Length k, nonnegative, descending.
    pub singular_values: Vec<f64>,
    /// cols x k, orthonormal columns.
    pub v: ComplexMatrix,
}

impl Svd {
    /// `U diag(sigma) V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut out = ComplexMatrix::zeros(m, n);
        for (idx, &s) in self.singular_values.iter().enumerate() {
            for i in 0..m {
                let ui = self.u[(i, idx)] * s;
                for j in 0..n {
                    out[(i, j)] += ui * self.v[(j, idx)].conj();
                }
            }
        }
        out
    }
}

/// Singular value decomposition of any finite rectangular matrix.
pub fn svd(a: &ComplexMatrix) -> Result<Svd, LinalgError> {
    let (m, n) = a.shape();
    let k = m.min(n);
    if n <= m {
        let v_spec = hermitian_eigen(&a.gram())?;
        let u_spec = hermitian_eigen(&a.cogram())?;
        let (v, singular_values, u) = assemble(a, &v_spec, &u_spec, k);
        Ok(Svd { u, singular_values, v })
    } else {
        // Work on the adjoint so the short side drives the decomposition.
        let adj = a.adjoint();
        let u_spec = hermitian_eigen(&adj.gram())?;
        let v_spec = hermitian_eigen(&adj.cogram())?;
        let (u, singular_values, v) = assemble(&adj, &u_spec, &v_spec, k);
        Ok(Svd { u, singular_values, v })
    }
}

/// Shared assembly for the tall (`rows >= cols`) orientation: takes the
/// spectrum of `A*A` (short side) and of `AA*` (long side), returns
/// `(short vectors, sigma, long vectors)` with sigma descending.
fn assemble(
    a: &ComplexMatrix,
    short_spec: &super::HermitianSpectrum,
    long_spec: &super::HermitianSpectrum,
    k: usize,
) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let m = a.rows();
    let n = a.cols();
    debug_assert_eq!(k, n);

    // Candidate (sigma, v, ||Av||) triples in descending Gram order.
    let mut triples: Vec<(f64, Vec<Complex64>)> = (0..n)
        .rev()
        .map(|j| {
            let v = short_spec.eigenvectors().column(j);
            let av = a.matvec(&v);
            (vec_norm(&av), v)
        })
        .collect();
    // Recomputing sigma as ||Av|| can perturb the Gram ordering in the
    // last ulps; restore descending order.
    triples.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());

    let sigma_max = triples.first().map_or(0.0, |t| t.0);
    let cutoff = sigma_max * 1e-12;

    let mut sigma = Vec::with_capacity(k);
    let mut v_cols: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for (s, v) in triples.into_iter().take(k) {
        if s > cutoff && s > 0.0 {
            let av = a.matvec(&v);
            let u: Vec<Complex64> = av.iter().map(|&z| z / s).collect();
            sigma.push(s);
            v_cols.push(v);
            u_cols.push(u);
        } else {
            sigma.push(0.0);
            v_cols.push(v);
            u_cols.push(Vec::new()); // completed below
        }
    }

    // Fill null-space slots for U from the long Gram's small-eigenvalue
    // vectors, orthonormalized against the columns already chosen.
    let empty: Vec<usize> = (0..k).filter(|&j| u_cols[j].is_empty()).collect();
    if !empty.is_empty() {
        let mut candidates: Vec<Vec<Complex64>> =
            (0..m).map(|j| long_spec.eigenvectors().column(j)).collect();
        for slot in empty {
            loop {
                let mut cand = candidates.remove(0);
                // Two Gram-Schmidt passes keep orthogonality tight.
                for _ in 0..2 {
                    for col in u_cols.iter().filter(|c| !c.is_empty()) {
                        let proj = inner(col, &cand);
                        for (ci, &oi) in cand.iter_mut().zip(col) {
                            *ci -= proj * oi;
                        }
                    }
                }
                let nrm = vec_norm(&cand);
                if nrm > 1e-3 {
                    for ci in cand.iter_mut() {
                        *ci /= nrm;
                    }
                    u_cols[slot] = cand;
                    break;
                }
            }
        }
    }

    let v = ComplexMatrix::from_fn(n, k, |i, j| v_cols[j][i]);
    let u = ComplexMatrix::from_fn(m, k, |i, j| u_cols[j][i]);
    (v, sigma, u)
}
