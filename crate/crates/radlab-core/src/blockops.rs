//! 2x2 block operator matrices: the off-diagonal embedding, closed-form
//! radius identities for structured blocks, and the mu/eta matrices of the
//! two-sided power bound.
//!
//! The closed-form identities here serve as independent oracles against
//! the canonical angle scan; production code computes the radius with
//! [`radius_theta_scan`].

use num_complex::Complex64;

use crate::linalg::{abs_op, func_apply, op_norm, ComplexMatrix, LinalgError};
use crate::numrad::{maximize_over_angle, radius_theta_scan};

/// The `(B, C)` data of `T = [[0, B], [C, 0]]`.
///
/// `B` maps the second summand into the first (`n1 x n2`) and `C` the
/// first into the second (`n2 x n1`), so the embedding is square of size
/// `n1 + n2`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OffDiagonalPair {
    b: ComplexMatrix,
    c: ComplexMatrix,
}

impl OffDiagonalPair {
    pub fn new(b: ComplexMatrix, c: ComplexMatrix) -> Result<Self, LinalgError> {
        if b.rows() != c.cols() || b.cols() != c.rows() {
            return Err(LinalgError::ShapeMismatch {
                expected: (b.cols(), b.rows()),
                got: c.shape(),
            });
        }
        Ok(Self { b, c })
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    /// `(n1, n2)`: sizes of the two summands.
    pub fn block_dims(&self) -> (usize, usize) {
        (self.b.rows(), self.b.cols())
    }

    /// The swapped pair `(C, B)`.
    pub fn swapped(&self) -> Self {
        Self {
            b: self.c.clone(),
            c: self.b.clone(),
        }
    }

    /// The pair of the adjoint matrix: `T* = [[0, C*], [B*, 0]]`.
    pub fn adjoint(&self) -> Self {
        Self {
            b: self.c.adjoint(),
            c: self.b.adjoint(),
        }
    }
}

/// Materialize `T = [[0, B], [C, 0]]`.
pub fn embed_offdiag(pair: &OffDiagonalPair) -> ComplexMatrix {
    let (n1, n2) = pair.block_dims();
    let n = n1 + n2;
    let mut t = ComplexMatrix::zeros(n, n);
    for i in 0..n1 {
        for j in 0..n2 {
            t[(i, n1 + j)] = pair.b[(i, j)];
        }
    }
    for i in 0..n2 {
        for j in 0..n1 {
            t[(n1 + i, j)] = pair.c[(i, j)];
        }
    }
    t
}

/// Radius of the off-diagonal embedding via the closed form
/// `w(T) = (1/2) sup_theta ||e^{i theta} B + e^{-i theta} C*||`,
/// maximized on the same grid-plus-refine schedule as the angle scan.
pub fn offdiag_radius(pair: &OffDiagonalPair, tol: f64) -> Result<f64, LinalgError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(LinalgError::BadScalar { name: "tol", value: tol });
    }
    let c_adj = pair.c.adjoint();
    let b = &pair.b;
    let (rows, cols) = b.shape();
    let eval = |theta: f64| -> f64 {
        let (sin, cos) = theta.sin_cos();
        let phase = Complex64::new(cos, sin);
        let phase_conj = phase.conj();
        let combo = ComplexMatrix::from_fn(rows, cols, |i, j| {
            b[(i, j)] * phase + c_adj[(i, j)] * phase_conj
        });
        op_norm(&combo)
    };
    let (_, sup) = maximize_over_angle(eval);
    Ok(0.5 * sup)
}

/// `w(diag(A, D)) = max(w(A), w(D))` for square diagonal blocks.
pub fn diag_block_radius(a: &ComplexMatrix, d: &ComplexMatrix) -> Result<f64, LinalgError> {
    let wa = radius_theta_scan(a, 1e-9)?.value;
    let wd = radius_theta_scan(d, 1e-9)?.value;
    Ok(wa.max(wd))
}

/// `w([[A, B], [B, A]]) = max(w(A + B), w(A - B))` for equal-size square
/// blocks.
pub fn symmetric_block_radius(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<f64, LinalgError> {
    if a.shape() != b.shape() {
        return Err(LinalgError::ShapeMismatch {
            expected: a.shape(),
            got: b.shape(),
        });
    }
    let plus = radius_theta_scan(&(a + b), 1e-9)?.value;
    let minus = radius_theta_scan(&(a - b), 1e-9)?.value;
    Ok(plus.max(minus))
}

/// The PSD pair
/// `mu  = |(C - B*) + i(C + B*)|^r + |(B* - C) + i(C + B*)|^r`,
/// `eta = |(B - C*) + i(B + C*)|^r + |(C* - B) + i(B + C*)|^r`,
/// computed via the operator absolute value and power calculus.
///
/// The additive mixing of `C` with `B*` forces square blocks of equal
/// size, so rectangular pairs are rejected.
pub fn mu_eta(
    pair: &OffDiagonalPair,
    r: f64,
) -> Result<(ComplexMatrix, ComplexMatrix), LinalgError> {
    let (n1, n2) = pair.block_dims();
    if n1 != n2 || !pair.b.is_square() {
        return Err(LinalgError::ShapeMismatch {
            expected: (n1, n1),
            got: (n2, n1),
        });
    }
    if !(r.is_finite() && r >= 2.0) {
        return Err(LinalgError::BadScalar { name: "r", value: r });
    }
    let i = Complex64::new(0.0, 1.0);
    let b_adj = pair.b.adjoint();
    let c_adj = pair.c.adjoint();

    let abs_pow = |m: &ComplexMatrix| -> Result<ComplexMatrix, LinalgError> {
        func_apply(&abs_op(m)?, r)
    };

    let c_plus_badj = (&pair.c + &b_adj).scaled(i);
    let c_minus_badj = &pair.c - &b_adj;
    let mu = &abs_pow(&(&c_minus_badj + &c_plus_badj))?
        + &abs_pow(&(&(-&c_minus_badj) + &c_plus_badj))?;

    let b_plus_cadj = (&pair.b + &c_adj).scaled(i);
    let b_minus_cadj = &pair.b - &c_adj;
    let eta = &abs_pow(&(&b_minus_cadj + &b_plus_cadj))?
        + &abs_pow(&(&(-&b_minus_cadj) + &b_plus_cadj))?;

    Ok((mu, eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cartesian;
    use crate::randgen::{generate, GenSpec, MatrixKind};

    fn random(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
        generate(&GenSpec {
            kind: MatrixKind::Ginibre,
            rows,
            cols,
            scale: 1.0,
            seed,
        })
        .unwrap()
    }

    fn scan(t: &ComplexMatrix) -> f64 {
        radius_theta_scan(t, 1e-9).unwrap().value
    }

    #[test]
    fn embed_examples() {
        let pair = OffDiagonalPair::new(
            ComplexMatrix::diag(&[1.0]),
            ComplexMatrix::diag(&[0.0]),
        )
        .unwrap();
        let t = embed_offdiag(&pair);
        assert_eq!(t, ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]));

        let eye = ComplexMatrix::identity(2);
        let pair = OffDiagonalPair::new(eye.clone(), eye).unwrap();
        let t = embed_offdiag(&pair);
        assert_eq!(t.shape(), (4, 4));
        assert!(t.hermitian_deviation() < 1e-15);
        assert!((t[(0, 2)].re - 1.0).abs() < 1e-15);
        assert!(t[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn embed_rectangular_block_placement() {
        let b = random(2, 3, 1);
        let c = random(3, 2, 2);
        let pair = OffDiagonalPair::new(b.clone(), c.clone()).unwrap();
        let t = embed_offdiag(&pair);
        assert_eq!(t.shape(), (5, 5));
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(t[(i, 2 + j)], b[(i, j)]);
            }
        }
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(t[(2 + i, j)], c[(i, j)]);
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t[(i, j)], Complex64::ZERO);
            }
        }
    }

    #[test]
    fn embed_rejects_mismatch() {
        let b = random(2, 3, 3);
        let c = random(2, 3, 4);
        assert!(matches!(
            OffDiagonalPair::new(b, c),
            Err(LinalgError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn offdiag_radius_examples() {
        let pair = OffDiagonalPair::new(
            ComplexMatrix::diag(&[1.0]),
            ComplexMatrix::diag(&[0.0]),
        )
        .unwrap();
        assert!((offdiag_radius(&pair, 1e-9).unwrap() - 0.5).abs() <= 1e-9);

        let pair = OffDiagonalPair::new(
            ComplexMatrix::diag(&[1.0]),
            ComplexMatrix::diag(&[1.0]),
        )
        .unwrap();
        assert!((offdiag_radius(&pair, 1e-9).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn offdiag_radius_matches_embedded_scan() {
        for seed in 0..8 {
            let (n1, n2) = (1 + (seed as usize % 3), 1 + ((seed as usize / 2) % 3));
            let pair = OffDiagonalPair::new(
                random(n1, n2, 40 + seed),
                random(n2, n1, 60 + seed),
            )
            .unwrap();
            let via_formula = offdiag_radius(&pair, 1e-9).unwrap();
            let via_scan = scan(&embed_offdiag(&pair));
            assert!(
                (via_formula - via_scan).abs() <= 1e-7 * via_scan.max(1.0),
                "seed {seed}: {via_formula} vs {via_scan}"
            );
        }
    }

    #[test]
    fn swap_symmetry() {
        for seed in 0..6 {
            let pair =
                OffDiagonalPair::new(random(2, 3, 100 + seed), random(3, 2, 200 + seed)).unwrap();
            let w1 = scan(&embed_offdiag(&pair));
            let w2 = scan(&embed_offdiag(&pair.swapped()));
            assert!((w1 - w2).abs() <= 1e-7 * w1.max(1.0));
        }
    }

    #[test]
    fn diag_block_examples_and_oracle() {
        assert!(
            (diag_block_radius(&ComplexMatrix::diag(&[2.0]), &ComplexMatrix::diag(&[1.0]))
                .unwrap()
                - 2.0)
                .abs()
                <= 1e-9
        );
        assert!(
            diag_block_radius(&ComplexMatrix::zeros(2, 2), &ComplexMatrix::zeros(3, 3)).unwrap()
                <= 1e-12
        );
        for seed in 0..6 {
            let a = random(3, 3, 300 + seed);
            let d = random(2, 2, 400 + seed);
            let split = diag_block_radius(&a, &d).unwrap();
            let joint = scan(&a.direct_sum(&d));
            assert!((split - joint).abs() <= 1e-7 * joint.max(1.0));
        }
    }

    #[test]
    fn symmetric_block_examples_and_oracle() {
        for seed in 0..6 {
            let a = random(2, 2, 500 + seed);
            let b = random(2, 2, 600 + seed);
            let formula = symmetric_block_radius(&a, &b).unwrap();
            // Assemble [[A, B], [B, A]] directly.
            let mut t = ComplexMatrix::zeros(4, 4);
            for i in 0..2 {
                for j in 0..2 {
                    t[(i, j)] = a[(i, j)];
                    t[(i + 2, j + 2)] = a[(i, j)];
                    t[(i, j + 2)] = b[(i, j)];
                    t[(i + 2, j)] = b[(i, j)];
                }
            }
            let joint = scan(&t);
            assert!(
                (formula - joint).abs() <= 1e-7 * joint.max(1.0),
                "seed {seed}"
            );
        }

        // A = 0 reduces to w(B); B = 0 reduces to w(A).
        let b = random(3, 3, 700);
        let zero = ComplexMatrix::zeros(3, 3);
        let wb = scan(&b);
        assert!((symmetric_block_radius(&zero, &b).unwrap() - wb).abs() <= 1e-9 * wb.max(1.0));
        let a = random(3, 3, 701);
        let wa = scan(&a);
        assert!((symmetric_block_radius(&a, &zero).unwrap() - wa).abs() <= 1e-9 * wa.max(1.0));
    }

    #[test]
    fn symmetric_offdiag_particular_case() {
        // w([[0, B], [B, 0]]) = w(B).
        for seed in 0..4 {
            let b = random(3, 3, 800 + seed);
            let pair = OffDiagonalPair::new(b.clone(), b.clone()).unwrap();
            let w_embed = scan(&embed_offdiag(&pair));
            let w_b = scan(&b);
            assert!((w_embed - w_b).abs() <= 1e-7 * w_b.max(1.0));
        }
    }

    #[test]
    fn mu_eta_scalar_example() {
        let pair = OffDiagonalPair::new(
            ComplexMatrix::diag(&[1.0]),
            ComplexMatrix::diag(&[1.0]),
        )
        .unwrap();
        let (mu, eta) = mu_eta(&pair, 2.0).unwrap();
        assert!((mu[(0, 0)].re - 8.0).abs() <= 1e-12);
        assert!((eta[(0, 0)].re - 8.0).abs() <= 1e-12);
    }

    #[test]
    fn mu_eta_zero_pair() {
        let z = ComplexMatrix::zeros(2, 2);
        let pair = OffDiagonalPair::new(z.clone(), z).unwrap();
        let (mu, eta) = mu_eta(&pair, 3.0).unwrap();
        assert!(mu.frobenius_norm() <= 1e-14);
        assert!(eta.frobenius_norm() <= 1e-14);
    }

    #[test]
    fn mu_eta_rejects_rectangular_and_small_r() {
        let pair =
            OffDiagonalPair::new(random(2, 3, 900), random(3, 2, 901)).unwrap();
        assert!(matches!(
            mu_eta(&pair, 2.0),
            Err(LinalgError::ShapeMismatch { .. })
        ));
        let sq = OffDiagonalPair::new(random(2, 2, 902), random(2, 2, 903)).unwrap();
        assert!(matches!(
            mu_eta(&sq, 1.5),
            Err(LinalgError::BadScalar { .. })
        ));
    }

    #[test]
    fn mu_eta_structural_identity() {
        // || |S+W|^r + |S-W|^r || = (1/2)^r max(||mu||, ||eta||) where
        // (S, W) is the Cartesian decomposition of the embedding.
        for seed in 0..6 {
            let n = 1 + (seed as usize % 3);
            let pair =
                OffDiagonalPair::new(random(n, n, 1000 + seed), random(n, n, 1100 + seed))
                    .unwrap();
            for r in [2.0, 3.0, 4.0] {
                let (mu, eta) = mu_eta(&pair, r).unwrap();
                let rhs = 0.5f64.powf(r) * op_norm(&mu).max(op_norm(&eta));

                let t = embed_offdiag(&pair);
                let parts = cartesian(&t).unwrap();
                let sw_plus = &parts.real_part + &parts.imag_part;
                let sw_minus = &parts.real_part - &parts.imag_part;
                let lhs = op_norm(
                    &(&func_apply(&abs_op(&sw_plus).unwrap(), r).unwrap()
                        + &func_apply(&abs_op(&sw_minus).unwrap(), r).unwrap()),
                );
                assert!(
                    (lhs - rhs).abs() <= 1e-7 * rhs.max(1.0),
                    "seed {seed} r {r}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn mu_eta_are_psd() {
        for seed in 0..4 {
            let pair =
                OffDiagonalPair::new(random(2, 2, 1200 + seed), random(2, 2, 1300 + seed))
                    .unwrap();
            let (mu, eta) = mu_eta(&pair, 2.0).unwrap();
            for m in [&mu, &eta] {
                let spec = crate::linalg::hermitian_eigen(m).unwrap();
                assert!(spec.min_eigenvalue() >= -1e-9 * op_norm(m).max(1.0));
            }
        }
    }
}
