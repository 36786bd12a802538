use super::*;
use crate::linalg::op_norm;
use crate::randgen::{generate, GenSpec, MatrixKind};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scan(t: &ComplexMatrix) -> f64 {
    radius_theta_scan(t, 1e-9).unwrap().value
}

fn random_square(n: usize, seed: u64) -> ComplexMatrix {
    generate(&GenSpec::square(MatrixKind::Ginibre, n, seed)).unwrap()
}

#[test]
fn theta_scan_normal_diagonal() {
    let t = ComplexMatrix::diag_complex(&[c(2.0, 0.0), c(-1.0, 1.0)]);
    let est = radius_theta_scan(&t, 1e-9).unwrap();
    assert!((est.value - 2.0).abs() <= 1e-9);
    assert!(est.witness_theta.is_some());
    let x = est.witness_vector.as_ref().unwrap();
    assert!((crate::linalg::vec_norm(x) - 1.0).abs() <= 1e-12);
    assert!(t.quadratic_form(x).norm() <= est.value + 1e-9);
}

#[test]
fn theta_scan_nilpotent_is_half_norm() {
    let t = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!((scan(&t) - 0.5).abs() <= 1e-9);
}

#[test]
fn theta_scan_symmetric_offdiag_is_one() {
    let t = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    assert!((scan(&t) - 1.0).abs() <= 1e-9);
}

#[test]
fn theta_scan_rejects_bad_input() {
    assert!(matches!(
        radius_theta_scan(&ComplexMatrix::zeros(2, 3), 1e-9),
        Err(LinalgError::NotSquare { .. })
    ));
    assert!(matches!(
        radius_theta_scan(&ComplexMatrix::identity(2), 0.0),
        Err(LinalgError::BadScalar { .. })
    ));
}

#[test]
fn rayleigh_identity() {
    let est = radius_rayleigh(&ComplexMatrix::identity(3), 4, 1e-9, 1).unwrap();
    assert!((est.value - 1.0).abs() <= 1e-9);
}

#[test]
fn rayleigh_rank_one_nilpotent() {
    // sup |conj(x1) x2| * 2 over the sphere is 1, at |x1| = |x2| = 1/sqrt(2).
    let t = ComplexMatrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
    let est = radius_rayleigh(&t, 16, 1e-9, 2).unwrap();
    assert!((est.value - 1.0).abs() <= 1e-8);
    let x = est.witness_vector.unwrap();
    assert!((x[0].norm() - core::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-5);
    assert!((x[1].norm() - core::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-5);
}

#[test]
fn rayleigh_agrees_with_theta_scan() {
    for seed in 0..8 {
        let t = random_square(6, 600 + seed);
        let w_scan = scan(&t);
        let w_ray = radius_rayleigh(&t, 48, 1e-9, seed).unwrap().value;
        assert!(
            (w_scan - w_ray).abs() <= 1e-6 * w_scan.max(1.0),
            "seed {seed}: scan {w_scan} vs rayleigh {w_ray}"
        );
    }
}

#[test]
fn sandwich_between_half_norm_and_norm() {
    for seed in 0..10 {
        let t = random_square(1 + (seed as usize % 6), 700 + seed);
        let w = scan(&t);
        let nrm = op_norm(&t);
        assert!(w >= nrm / 2.0 - 1e-8);
        assert!(w <= nrm + 1e-8);
    }
}

#[test]
fn power_inequality() {
    for seed in 0..6 {
        let t = random_square(4, 800 + seed);
        let w = scan(&t);
        for n in 2u32..=4 {
            let wn = scan(&t.pow_int(n));
            let bound = w.powi(n as i32);
            assert!(wn <= bound + 1e-7 * bound.max(1.0), "seed {seed} n {n}");
        }
    }
}

#[test]
fn normal_matrices_radius_is_spectral_radius() {
    for seed in 0..6 {
        let n = 2 + (seed as usize % 4);
        let u = generate(&GenSpec::square(MatrixKind::Unitary, n, 900 + seed)).unwrap();
        let lams: alloc::vec::Vec<Complex64> = crate::randgen::unit_vector(n, 950 + seed)
            .into_iter()
            .map(|z| z * 3.0)
            .collect();
        let t = &(&u * &ComplexMatrix::diag_complex(&lams)) * &u.adjoint();
        let expect = lams.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let w = scan(&t);
        assert!((w - expect).abs() <= 1e-8 * expect.max(1.0));
    }
}

#[test]
fn unitary_invariance_and_scaling() {
    for seed in 0..5 {
        let t = random_square(5, 1000 + seed);
        let u = generate(&GenSpec::square(MatrixKind::Unitary, 5, 1100 + seed)).unwrap();
        let rotated = &(&u.adjoint() * &t) * &u;
        let w = scan(&t);
        assert!((scan(&rotated) - w).abs() <= 1e-8 * w.max(1.0));

        let z = c(-1.25, 0.75);
        let scaled = t.scaled(z);
        assert!((scan(&scaled) - z.norm() * w).abs() <= 1e-10 * (z.norm() * w).max(1.0));
    }
}

#[test]
fn wp_single_matrix_reduces_to_radius() {
    for seed in 0..4 {
        let t = random_square(4, 1200 + seed);
        let w = scan(&t);
        for p in [1.0, 2.0, 3.5] {
            let wp = wp_functional(core::slice::from_ref(&t), p, 48, seed)
                .unwrap()
                .value;
            assert!((wp - w).abs() <= 1e-6 * w.max(1.0), "p {p}");
        }
    }
}

#[test]
fn wp_pair_of_identities() {
    let ts = [ComplexMatrix::identity(3), ComplexMatrix::identity(3)];
    let wp = wp_functional(&ts, 2.0, 4, 0).unwrap().value;
    assert!((wp - core::f64::consts::SQRT_2).abs() <= 1e-9);
}

#[test]
fn wp_orthogonal_projections() {
    // Maximizing (a^2 + (1-a)^2)^(1/2) over a in [0, 1] gives 1 at a basis
    // vector.
    let ts = [
        ComplexMatrix::diag(&[1.0, 0.0]),
        ComplexMatrix::diag(&[0.0, 1.0]),
    ];
    let est = wp_functional(&ts, 2.0, 16, 7).unwrap();
    assert!((est.value - 1.0).abs() <= 1e-7);
    let x = est.witness_vector.unwrap();
    let split = x[0].norm_sqr().min(x[1].norm_sqr());
    assert!(split <= 1e-5, "witness should sit at a basis vector");
}

#[test]
fn wp_rejects_mismatched_sizes() {
    let ts = [ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
    assert!(matches!(
        wp_functional(&ts, 2.0, 4, 0),
        Err(LinalgError::ShapeMismatch { .. })
    ));
    assert!(matches!(
        wp_functional(&[], 2.0, 4, 0),
        Err(LinalgError::Empty)
    ));
}

#[test]
fn zeta_equal_arguments_vanish() {
    let d = generate(&GenSpec::square(MatrixKind::Psd, 3, 42)).unwrap();
    let spec = ZetaSpec {
        d1: d.clone(),
        d2: d,
        m: 1,
        r: 1.0,
        alpha: 0.5,
    };
    let inf = inf_zeta(&spec, 8, 0).unwrap();
    assert!(inf.abs() <= 1e-12);
}

#[test]
fn zeta_identity_vs_zero_is_constant_half() {
    let spec = ZetaSpec {
        d1: ComplexMatrix::identity(2),
        d2: ComplexMatrix::zeros(2, 2),
        m: 1,
        r: 1.0,
        alpha: 0.5,
    };
    let inf = inf_zeta(&spec, 8, 0).unwrap();
    assert!((inf - 0.5).abs() <= 1e-12);
}

#[test]
fn zeta_descent_beats_random_sampling() {
    for seed in 0..3 {
        let d1 = generate(&GenSpec::square(MatrixKind::Psd, 3, 2000 + seed)).unwrap();
        let d2 = generate(&GenSpec::square(MatrixKind::Psd, 3, 2100 + seed)).unwrap();
        let spec = ZetaSpec {
            d1: d1.clone(),
            d2: d2.clone(),
            m: 2,
            r: 2.5,
            alpha: 0.25,
        };
        let inf = inf_zeta(&spec, 16, seed).unwrap();
        assert!(inf >= 0.0);

        // Random-sampling oracle.
        let a = func_apply(&d1, 2.0 * 2.5 * 0.25 / 2.0).unwrap();
        let b = func_apply(&d2, 2.0 * 2.5 * 0.75 / 2.0).unwrap();
        let mut sample_min = f64::INFINITY;
        for k in 0..10_000u64 {
            let x = crate::randgen::unit_vector(3, child_seed(3000 + seed, "oracle", k));
            let av = a.quadratic_form(&x).re.max(0.0);
            let bv = b.quadratic_form(&x).re.max(0.0);
            let h = av - bv;
            sample_min = sample_min.min(0.25 * h * h);
        }
        assert!(inf <= sample_min + 1e-9, "inf {inf} vs sampled {sample_min}");
    }
}

#[test]
fn grid_oracle_is_a_lower_bound() {
    for seed in 0..4 {
        let t = random_square(4, 1500 + seed);
        let lower = radius_grid_sample(&t, 200, seed).value;
        let w = scan(&t);
        assert!(lower <= w + 1e-9);
        assert!(lower >= w / 2.0 - 1e-9, "sampling should not be hopeless");
    }
}
