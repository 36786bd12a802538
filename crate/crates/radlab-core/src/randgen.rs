//! Seeded, reproducible generation of test matrices and vectors.
//!
//! Randomness comes from a small counter-based generator: a 64-bit mix of
//! (seed, counter) feeds a Box-Muller transform for complex Gaussians.
//! There is no hidden state anywhere, so the same [`GenSpec`] produces the
//! same matrix bit-for-bit on every platform, and child seeds derived with
//! [`child_seed`] give independent streams per (case, trial) that do not
//! shift when the trial count changes.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::linalg::{op_norm, ComplexMatrix, LinalgError};

/// What kind of matrix to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MatrixKind {
    /// I.i.d. standard complex Gaussian entries, times `scale`.
    Ginibre,
    /// `(G + G*) / 2` of a Ginibre draw (square only).
    Hermitian,
    /// `G* G / n` of a Ginibre draw (square only).
    Psd,
    /// Orthonormalization of a Ginibre draw (square only).
    Unitary,
    /// `[[0, B], [0, 0]]` block form; the square is exactly zero.
    NilpotentOffdiag,
    /// Ginibre draw rescaled to operator norm at most one.
    Contraction,
}

impl MatrixKind {
    fn needs_square(self) -> bool {
        !matches!(self, MatrixKind::Ginibre | MatrixKind::Contraction)
    }
}

/// Specification of one deterministic matrix draw.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenSpec {
    pub kind: MatrixKind,
    pub rows: usize,
    pub cols: usize,
    pub scale: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn square(kind: MatrixKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            rows: n,
            cols: n,
            scale: 1.0,
            seed,
        }
    }
}

/// SplitMix64 finalizer; the core bit mixer everything else builds on.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a over a byte string, used to fold textual labels into seeds.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Child seed for trial `index` of the stream labelled `label` under
/// `master`. Deterministic and collision-mixed; earlier trials are
/// unaffected by how many trials follow.
pub fn child_seed(master: u64, label: &str, index: u64) -> u64 {
    mix(master ^ mix(fnv1a(label.as_bytes())) ^ mix(index.wrapping_mul(0xa076_1d64_78bd_642f)))
}

/// Counter-based random stream: no state beyond (seed, position).
#[derive(Debug, Clone)]
pub struct Stream {
    seed: u64,
    counter: u64,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = mix(self.seed ^ mix(self.counter));
        self.counter += 1;
        v
    }

    /// Uniform in `(0, 1]`; never zero, so it is safe under `ln`.
    pub fn next_unit(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform integer in `0..bound`.
    pub fn next_below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }

    /// Two independent standard real Gaussians via Box-Muller.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = TAU * u2;
        (r * phi.cos(), r * phi.sin())
    }

    /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        let (a, b) = self.next_gaussian_pair();
        const INV_SQRT2: f64 = core::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(a * INV_SQRT2, b * INV_SQRT2)
    }
}

/// Raw standard real Gaussians; `assemble` turns them into matrices. The
/// split exists so that search-style callers can perturb the raw
/// coordinates while staying inside the admissible set.
pub fn gaussians(seed: u64, count: usize) -> Vec<f64> {
    let mut s = Stream::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (a, b) = s.next_gaussian_pair();
        out.push(a);
        if out.len() < count {
            out.push(b);
        }
    }
    out
}

/// How many raw Gaussians a draw of this shape consumes.
pub fn raw_len(kind: MatrixKind, rows: usize, cols: usize) -> usize {
    match kind {
        MatrixKind::NilpotentOffdiag => {
            let n1 = rows / 2;
            2 * n1 * (rows - n1)
        }
        _ => 2 * rows * cols,
    }
}

/// Deterministic matrix from raw Gaussian coordinates.
pub fn assemble(
    kind: MatrixKind,
    rows: usize,
    cols: usize,
    scale: f64,
    raw: &[f64],
) -> Result<ComplexMatrix, LinalgError> {
    if rows == 0 || cols == 0 {
        return Err(LinalgError::Empty);
    }
    if kind.needs_square() && rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(LinalgError::BadScalar {
            name: "scale",
            value: scale,
        });
    }
    assert_eq!(raw.len(), raw_len(kind, rows, cols));

    const INV_SQRT2: f64 = core::f64::consts::FRAC_1_SQRT_2;
    let complex_from = |chunk: &[f64]| -> Vec<Complex64> {
        chunk
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0] * INV_SQRT2 * scale, p[1] * INV_SQRT2 * scale))
            .collect()
    };

    match kind {
        MatrixKind::Ginibre => ComplexMatrix::new(rows, cols, complex_from(raw)),
        MatrixKind::Hermitian => {
            let g = ComplexMatrix::new(rows, cols, complex_from(raw))?;
            Ok((&g + &g.adjoint()).scaled_re(0.5))
        }
        MatrixKind::Psd => {
            let g = ComplexMatrix::new(rows, cols, complex_from(raw))?;
            Ok(g.gram().scaled_re(1.0 / cols as f64))
        }
        MatrixKind::Unitary => {
            let g = ComplexMatrix::new(rows, cols, complex_from(raw))?;
            Ok(orthonormalize(&g))
        }
        MatrixKind::NilpotentOffdiag => {
            let n1 = rows / 2;
            let n2 = rows - n1;
            let mut m = ComplexMatrix::zeros(rows, cols);
            if n1 > 0 {
                let b = complex_from(raw);
                for i in 0..n1 {
                    for j in 0..n2 {
                        m[(i, n1 + j)] = b[i * n2 + j];
                    }
                }
            }
            Ok(m)
        }
        MatrixKind::Contraction => {
            let g = ComplexMatrix::new(rows, cols, complex_from(raw))?;
            let norm = op_norm(&g);
            if norm > 1.0 {
                Ok(g.scaled_re(1.0 / norm))
            } else {
                Ok(g)
            }
        }
    }
}

/// Draw the matrix described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<ComplexMatrix, LinalgError> {
    if spec.rows == 0 || spec.cols == 0 {
        return Err(LinalgError::Empty);
    }
    let raw = gaussians(spec.seed, raw_len(spec.kind, spec.rows, spec.cols));
    assemble(spec.kind, spec.rows, spec.cols, spec.scale, &raw)
}

/// Deterministic random unit vector; norm is one to within rounding.
pub fn unit_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    assert!(dim >= 1);
    let mut s = Stream::new(seed);
    loop {
        let x: Vec<Complex64> = (0..dim).map(|_| s.next_complex_gaussian()).collect();
        let norm = crate::linalg::vec_norm(&x);
        if norm > 1e-6 {
            return x.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Modified Gram-Schmidt with two passes; columns of a generic Gaussian
/// draw are independent, so the result is unitary.
fn orthonormalize(g: &ComplexMatrix) -> ComplexMatrix {
    let n = g.rows();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for _ in 0..2 {
            for i in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let proj = crate::linalg::inner(&head[i], &tail[0]);
                for (c, &h) in tail[0].iter_mut().zip(&head[i]) {
                    *c -= proj * h;
                }
            }
        }
        let norm = crate::linalg::vec_norm(&cols[j]);
        // A degenerate draw has probability zero; fall back to a basis
        // vector so the routine stays total.
        if norm < 1e-12 {
            for (k, c) in cols[j].iter_mut().enumerate() {
                *c = if k == j { Complex64::ONE } else { Complex64::ZERO };
            }
        } else {
            for c in cols[j].iter_mut() {
                *c /= norm;
            }
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}
