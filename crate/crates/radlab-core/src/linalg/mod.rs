//! Dense complex linear algebra at desk scale (dimensions up to a few dozen).
//!
//! The carrier type is [`ComplexMatrix`], a row-major dense matrix of
//! `Complex64` entries. On top of it sit a cyclic Jacobi eigensolver for
//! Hermitian matrices, a Gram-matrix SVD, the operator absolute value,
//! power functional calculus, the operator norm, and the Cartesian
//! decomposition.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

mod eigen;
mod svd;

pub use eigen::{hermitian_eigen, HermitianSpectrum};
pub use svd::{svd, Svd};

pub(crate) use eigen::max_eigenvalue_inplace;

/// Relative Frobenius deviation from `H = H*` tolerated by the Hermitian
/// solvers.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative size of negative eigenvalues clamped to zero inside
/// [`func_apply`]; anything more negative rejects the input as indefinite.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// Errors raised by the linear-algebra layer.
#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// The operation needs a square matrix.
    NotSquare { rows: usize, cols: usize },
    /// The input deviates from `H = H*` by more than the tolerance
    /// (relative Frobenius deviation is reported).
    NotHermitian { deviation: f64 },
    /// The input has an eigenvalue below the PSD clamping tolerance.
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    /// Jacobi sweeps hit the iteration cap before the off-diagonal mass
    /// dropped under the target.
    NoConvergence { residual: f64, sweeps: usize },
    /// Operand dimensions do not line up.
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// Matrix entries must all be finite.
    NonFinite,
    /// Matrices need at least one row and one column.
    Empty,
    /// A scalar argument is outside its admissible range.
    BadScalar { name: &'static str, value: f64 },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            LinalgError::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (relative deviation {deviation:.3e})")
            }
            LinalgError::NotPositiveSemidefinite { min_eigenvalue } => {
                write!(f, "matrix is not PSD (smallest eigenvalue {min_eigenvalue:.3e})")
            }
            LinalgError::NoConvergence { residual, sweeps } => write!(
                f,
                "eigensolver did not converge after {sweeps} sweeps (residual {residual:.3e})"
            ),
            LinalgError::ShapeMismatch { expected, got } => write!(
                f,
                "shape mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            LinalgError::NonFinite => write!(f, "matrix entries must be finite"),
            LinalgError::Empty => write!(f, "matrix must have at least one row and one column"),
            LinalgError::BadScalar { name, value } => {
                write!(f, "scalar `{name}` out of range: {value}")
            }
        }
    }
}

/// Dense rectangular complex matrix, row-major.
///
/// Invariants: `entries.len() == rows * cols`, `rows, cols >= 1`, and all
/// entries are finite. [`ComplexMatrix::new`] enforces them; arithmetic on
/// valid matrices preserves them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build a matrix from row-major entries, validating the invariants.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                expected: (rows, cols),
                got: (entries.len(), 1),
            });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { rows, cols, entries })
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_parts(rows, cols, vec![Complex64::ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::from_parts(rows, cols, entries)
    }

    /// Diagonal matrix from real entries.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    /// Diagonal matrix from complex entries.
    pub fn diag_complex(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { Complex64::ZERO })
    }

    /// Square matrix from row-major real entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self::from_parts(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        Self::from_parts(
            self.rows,
            self.cols,
            self.entries.iter().map(|&e| e * z).collect(),
        )
    }

    pub fn scaled_re(&self, x: f64) -> Self {
        self.scaled(Complex64::new(x, 0.0))
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a * b)
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// The sesquilinear form `<Ax, x> = x* A x`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        assert!(self.is_square());
        let ax = self.matvec(x);
        inner(x, &ax)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of `A - A*` (square matrices).
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut sum = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                sum += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// `A* A` (cols x cols), Hermitian PSD.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut g = Self::zeros(n, n);
        for k in 0..self.rows {
            let row = self.row(k);
            for i in 0..n {
                let ci = row[i].conj();
                for j in 0..n {
                    g[(i, j)] += ci * row[j];
                }
            }
        }
        g
    }

    /// `A A*` (rows x rows), Hermitian PSD.
    pub fn cogram(&self) -> Self {
        self.adjoint().gram()
    }

    /// Integer matrix power; `n = 0` gives the identity.
    pub fn pow_int(&self, n: u32) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Block-diagonal direct sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        Self::from_fn(r1 + r2, c1 + c2, |i, j| {
            if i < r1 && j < c1 {
                self[(i, j)]
            } else if i >= r1 && j >= c1 {
                other[(i - r1, j - c1)]
            } else {
                Complex64::ZERO
            }
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape());
        ComplexMatrix::from_parts(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape());
        ComplexMatrix::from_parts(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scaled_re(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows);
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = ComplexMatrix::zeros(m, n);
        for i in 0..m {
            for l in 0..k {
                let a = self[(i, l)];
                let rrow = rhs.row(l);
                let orow = &mut out.entries[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

/// Complex inner product `<x, y> = sum conj(x_i) y_i` (conjugate-linear in
/// the first slot).
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(&a, &b)| a.conj() * b).sum()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Cartesian decomposition `T = S + iW` with Hermitian `S`, `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianParts {
    /// `S = (T + T*) / 2`.
    pub real_part: ComplexMatrix,
    /// `W = (T - T*) / (2i)`.
    pub imag_part: ComplexMatrix,
}

impl CartesianParts {
    /// `S + iW`, which recovers `T` up to rounding.
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.real_part + &self.imag_part.scaled(Complex64::new(0.0, 1.0))
    }
}

/// Cartesian decomposition of a square matrix.
pub fn cartesian(t: &ComplexMatrix) -> Result<CartesianParts, LinalgError> {
    if !t.is_square() {
        return Err(LinalgError::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let n = t.rows();
    let half = Complex64::new(0.5, 0.0);
    let neg_half_i = Complex64::new(0.0, -0.5);
    let real_part = ComplexMatrix::from_fn(n, n, |i, j| (t[(i, j)] + t[(j, i)].conj()) * half);
    let imag_part =
        ComplexMatrix::from_fn(n, n, |i, j| (t[(i, j)] - t[(j, i)].conj()) * neg_half_i);
    Ok(CartesianParts { real_part, imag_part })
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    // Eigenvalues of the smaller Gram matrix.
    let gram = if a.rows() <= a.cols() { a.cogram() } else { a.gram() };
    let n = gram.rows();
    let mut buf = gram.entries;
    let lam = max_eigenvalue_inplace(&mut buf, n)
        .expect("Gram matrix eigensolve failed");
    lam.max(0.0).sqrt()
}

/// Spectral decomposition of `|A| = (A*A)^{1/2}`.
///
/// The eigenvalues are the singular values of `A` (ascending) and the
/// eigenvectors are the right singular vectors.
pub fn abs_spectrum(a: &ComplexMatrix) -> Result<HermitianSpectrum, LinalgError> {
    let spec = hermitian_eigen(&a.gram())?;
    Ok(spec.map_eigenvalues(|lam| lam.max(0.0).sqrt()))
}

/// Operator absolute value `|A| = (A*A)^{1/2}` (cols x cols, Hermitian PSD).
pub fn abs_op(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    Ok(abs_spectrum(a)?.reconstruct())
}

/// Power functional calculus on a Hermitian PSD matrix:
/// `H -> V diag(max(lambda, 0)^exponent) V*`.
///
/// Eigenvalues in `[-PSD_CLAMP_TOL * ||H||, 0)` are treated as numerical
/// noise and clamped to zero; anything lower rejects the input.
pub fn func_apply(h: &ComplexMatrix, exponent: f64) -> Result<ComplexMatrix, LinalgError> {
    if !(exponent.is_finite() && exponent >= 0.0) {
        return Err(LinalgError::BadScalar {
            name: "exponent",
            value: exponent,
        });
    }
    let spec = hermitian_eigen(h)?;
    let scale = spec
        .eigenvalues()
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let min = spec.eigenvalues()[0];
    if min < -PSD_CLAMP_TOL * scale {
        return Err(LinalgError::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    Ok(spec.apply_power(exponent))
}
