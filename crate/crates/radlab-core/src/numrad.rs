//! Numerical radius and related extremal functionals.
//!
//! [`radius_theta_scan`] is the canonical radius algorithm: it maximizes
//! `lambda_max((e^{i theta} T + e^{-i theta} T*) / 2)` over a 720-point
//! angle grid and golden-section refines around the best grid point.
//! [`radius_rayleigh`] is an independent oracle that runs projected
//! gradient ascent of `|<Tx, x>|^2` on the unit sphere from seeded random
//! starts. [`wp_functional`] and [`inf_zeta`] are best-found bounds (a
//! lower bound for the supremum, an upper bound for the infimum) computed
//! by the same multi-restart ascent machinery.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::linalg::{
    cartesian, func_apply, hermitian_eigen, inner, max_eigenvalue_inplace, vec_norm,
    ComplexMatrix, LinalgError,
};
use crate::randgen::{child_seed, unit_vector};

const GRID_POINTS: usize = 720;
const THETA_WIDTH: f64 = 1e-10;
const IMPROVEMENT_TOL: f64 = 1e-12;
const MAX_ASCENT_ITERS: usize = 500;

/// How a radius-like value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Method {
    ThetaScan,
    Rayleigh,
    GridOracle,
}

/// A numerical-radius (or `w_p`) value together with its witness and
/// method metadata.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadiusEstimate {
    pub value: f64,
    /// Maximizing angle, in `[0, 2 pi)`, when the method produces one.
    pub witness_theta: Option<f64>,
    /// Unit vector attaining the value (up to the method's tolerance).
    pub witness_vector: Option<Vec<Complex64>>,
    pub method: Method,
    pub tolerance: f64,
    /// Set when the producing ascent stopped on a failed line search
    /// rather than on converged improvement.
    pub stagnated: bool,
}

/// Arguments of the Young-refinement infimum term: `zeta(X)` compares the
/// quadratic forms of `D1^(2 r alpha / m)` and `D2^(2 r (1 - alpha) / m)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZetaSpec {
    pub d1: ComplexMatrix,
    pub d2: ComplexMatrix,
    pub m: u32,
    pub r: f64,
    pub alpha: f64,
}

impl ZetaSpec {
    fn validate(&self) -> Result<(), LinalgError> {
        if self.d1.shape() != self.d2.shape() {
            return Err(LinalgError::ShapeMismatch {
                expected: self.d1.shape(),
                got: self.d2.shape(),
            });
        }
        if !self.d1.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.d1.rows(),
                cols: self.d1.cols(),
            });
        }
        if self.m < 1 {
            return Err(LinalgError::BadScalar {
                name: "m",
                value: self.m as f64,
            });
        }
        if !(self.r.is_finite() && self.r >= self.m as f64) {
            return Err(LinalgError::BadScalar {
                name: "r",
                value: self.r,
            });
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(LinalgError::BadScalar {
                name: "alpha",
                value: self.alpha,
            });
        }
        Ok(())
    }
}

/// Maximize a `2 pi`-periodic objective: uniform 720-point grid, then
/// golden-section refinement of the best grid cell down to width 1e-10.
/// Returns the best (angle, value) over every evaluation made.
pub(crate) fn maximize_over_angle(mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let step = TAU / GRID_POINTS as f64;
    let mut best_theta = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for j in 0..GRID_POINTS {
        let theta = j as f64 * step;
        let v = f(theta);
        if v > best_val {
            best_val = v;
            best_theta = theta;
        }
    }

    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut a = best_theta - step;
    let mut b = best_theta + step;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best_val {
            best_val = v;
            best_theta = x;
        }
    }
    while b - a > THETA_WIDTH {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
            if f2 > best_val {
                best_val = f2;
                best_theta = x2;
            }
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
            if f1 > best_val {
                best_val = f1;
                best_theta = x1;
            }
        }
    }

    let mut theta = best_theta % TAU;
    if theta < 0.0 {
        theta += TAU;
    }
    (theta, best_val)
}

/// Numerical radius by angle scan.
///
/// Deterministic; the returned witness vector is the top eigenvector of
/// the rotated Hermitian part at the maximizing angle, and satisfies
/// `|<Tx, x>| = w(T)` up to the scan tolerance.
pub fn radius_theta_scan(t: &ComplexMatrix, tol: f64) -> Result<RadiusEstimate, LinalgError> {
    if !t.is_square() {
        return Err(LinalgError::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(LinalgError::BadScalar { name: "tol", value: tol });
    }
    let n = t.rows();
    let parts = cartesian(t)?;
    let s = parts.real_part.entries();
    let w = parts.imag_part.entries();

    // H(theta) = (e^{i theta} T + e^{-i theta} T*) / 2 = S cos(theta) - W sin(theta).
    let mut scratch = vec![Complex64::ZERO; n * n];
    let mut failure: Option<LinalgError> = None;
    let mut eval = |theta: f64| -> f64 {
        let (sin, cos) = theta.sin_cos();
        for ((dst, &si), &wi) in scratch.iter_mut().zip(s).zip(w) {
            *dst = si * cos - wi * sin;
        }
        match max_eigenvalue_inplace(&mut scratch, n) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                f64::NEG_INFINITY
            }
        }
    };
    let (theta, value) = maximize_over_angle(&mut eval);
    if let Some(e) = failure {
        return Err(e);
    }

    let (sin, cos) = theta.sin_cos();
    let h = &parts.real_part.scaled_re(cos) - &parts.imag_part.scaled_re(sin);
    let witness = hermitian_eigen(&h)?.top_eigenvector();

    Ok(RadiusEstimate {
        value,
        witness_theta: Some(theta),
        witness_vector: Some(witness),
        method: Method::ThetaScan,
        tolerance: tol,
        stagnated: false,
    })
}

/// Outcome of one multi-restart spherical ascent.
struct AscentOutcome {
    objective: f64,
    x: Vec<Complex64>,
    stagnated: bool,
}

/// Projected gradient ascent on the unit sphere with backtracking line
/// search; stops when the objective improves by less than 1e-12 or the
/// line search fails (reported as stagnation).
fn sphere_ascend(
    mut x: Vec<Complex64>,
    mut value: impl FnMut(&[Complex64]) -> f64,
    mut grad: impl FnMut(&[Complex64]) -> Vec<Complex64>,
) -> AscentOutcome {
    let mut fx = value(&x);
    let mut alpha = 0.5;
    let mut stagnated = false;
    for _ in 0..MAX_ASCENT_ITERS {
        let g = grad(&x);
        // Remove the radial (and phase) component.
        let radial = inner(&x, &g);
        let mut dir: Vec<Complex64> = g
            .iter()
            .zip(&x)
            .map(|(&gi, &xi)| gi - radial * xi)
            .collect();
        let gn = vec_norm(&dir);
        if gn <= 1e-15 * (1.0 + fx.abs()) {
            break;
        }
        for d in dir.iter_mut() {
            *d /= gn;
        }

        let mut accepted = false;
        let mut step = alpha;
        for _ in 0..60 {
            let mut y: Vec<Complex64> = x
                .iter()
                .zip(&dir)
                .map(|(&xi, &di)| xi + di * step)
                .collect();
            let ny = vec_norm(&y);
            for yi in y.iter_mut() {
                *yi /= ny;
            }
            let fy = value(&y);
            if fy > fx + 1e-4 * step * gn {
                let improvement = fy - fx;
                x = y;
                fx = fy;
                alpha = (step * 2.0).min(1.0e3);
                accepted = true;
                if improvement < IMPROVEMENT_TOL {
                    return AscentOutcome {
                        objective: fx,
                        x,
                        stagnated: false,
                    };
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            stagnated = true;
            break;
        }
    }
    AscentOutcome {
        objective: fx,
        x,
        stagnated,
    }
}

fn best_of_restarts(
    dim: usize,
    restarts: usize,
    seed: u64,
    label: &str,
    mut run: impl FnMut(Vec<Complex64>) -> AscentOutcome,
) -> AscentOutcome {
    let mut best: Option<AscentOutcome> = None;
    for k in 0..restarts {
        let x0 = unit_vector(dim, child_seed(seed, label, k as u64));
        let out = run(x0);
        let better = match &best {
            None => true,
            Some(b) => out.objective > b.objective,
        };
        if better {
            best = Some(out);
        }
    }
    best.expect("restarts >= 1")
}

/// Numerical radius by projected gradient ascent of `|<Tx, x>|^2` from
/// `restarts` seeded random starts. Independent of the angle scan.
pub fn radius_rayleigh(
    t: &ComplexMatrix,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> Result<RadiusEstimate, LinalgError> {
    if !t.is_square() {
        return Err(LinalgError::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    if restarts < 1 {
        return Err(LinalgError::BadScalar {
            name: "restarts",
            value: restarts as f64,
        });
    }
    let n = t.rows();
    let adj = t.adjoint();

    let value = |x: &[Complex64]| t.quadratic_form(x).norm_sqr();
    let grad = |x: &[Complex64]| -> Vec<Complex64> {
        let tx = t.matvec(x);
        let ax = adj.matvec(x);
        let m = inner(x, &tx);
        let mc = m.conj();
        tx.iter()
            .zip(&ax)
            .map(|(&ti, &ai)| (mc * ti + m * ai) * 2.0)
            .collect()
    };

    let best = best_of_restarts(n, restarts, seed, "rayleigh", |x0| {
        sphere_ascend(x0, &value, &grad)
    });

    let m = t.quadratic_form(&best.x);
    let mut theta = (-m.arg()) % TAU;
    if theta < 0.0 {
        theta += TAU;
    }
    Ok(RadiusEstimate {
        value: best.objective.max(0.0).sqrt(),
        witness_theta: Some(theta),
        witness_vector: Some(best.x),
        method: Method::Rayleigh,
        tolerance: tol,
        stagnated: best.stagnated,
    })
}

/// Crude sampling oracle: the best `|<Tx, x>|` over seeded random unit
/// vectors. A lower bound on `w(T)`; useful as a third opinion in tests.
pub fn radius_grid_sample(t: &ComplexMatrix, samples: usize, seed: u64) -> RadiusEstimate {
    assert!(t.is_square() && samples >= 1);
    let n = t.rows();
    let mut best = f64::NEG_INFINITY;
    let mut best_x = Vec::new();
    for k in 0..samples {
        let x = unit_vector(n, child_seed(seed, "grid-oracle", k as u64));
        let v = t.quadratic_form(&x).norm();
        if v > best {
            best = v;
            best_x = x;
        }
    }
    RadiusEstimate {
        value: best,
        witness_theta: None,
        witness_vector: Some(best_x),
        method: Method::GridOracle,
        tolerance: f64::INFINITY,
        stagnated: false,
    }
}

/// Best-found value of `(sum_i |<T_i x, x>|^p)^{1/p}` over the unit
/// sphere. A lower bound on the supremum `w_p(T_1, ..., T_n)`.
pub fn wp_functional(
    ts: &[ComplexMatrix],
    p: f64,
    restarts: usize,
    seed: u64,
) -> Result<RadiusEstimate, LinalgError> {
    let first = ts.first().ok_or(LinalgError::Empty)?;
    if !first.is_square() {
        return Err(LinalgError::NotSquare {
            rows: first.rows(),
            cols: first.cols(),
        });
    }
    for t in ts {
        if t.shape() != first.shape() {
            return Err(LinalgError::ShapeMismatch {
                expected: first.shape(),
                got: t.shape(),
            });
        }
    }
    if !(p.is_finite() && p >= 1.0) {
        return Err(LinalgError::BadScalar { name: "p", value: p });
    }
    if restarts < 1 {
        return Err(LinalgError::BadScalar {
            name: "restarts",
            value: restarts as f64,
        });
    }
    let n = first.rows();
    let adjs: Vec<ComplexMatrix> = ts.iter().map(ComplexMatrix::adjoint).collect();

    let value = |x: &[Complex64]| -> f64 {
        ts.iter()
            .map(|t| t.quadratic_form(x).norm().powf(p))
            .sum()
    };
    let grad = |x: &[Complex64]| -> Vec<Complex64> {
        let mut g = vec![Complex64::ZERO; n];
        for (t, adj) in ts.iter().zip(&adjs) {
            let tx = t.matvec(x);
            let ax = adj.matvec(x);
            let m = inner(x, &tx);
            let abs = m.norm();
            if abs < 1e-150 && p < 2.0 {
                // Subgradient 0 at the kink; restarts escape it.
                continue;
            }
            let coeff = 0.5 * p * abs.powf(p - 2.0);
            let mc = m.conj();
            for ((gi, &ti), &ai) in g.iter_mut().zip(&tx).zip(&ax) {
                *gi += (mc * ti + m * ai) * coeff;
            }
        }
        g
    };

    let best = best_of_restarts(n, restarts, seed, "wp", |x0| {
        sphere_ascend(x0, &value, &grad)
    });

    Ok(RadiusEstimate {
        value: best.objective.max(0.0).powf(1.0 / p),
        witness_theta: None,
        witness_vector: Some(best.x),
        method: Method::Rayleigh,
        tolerance: IMPROVEMENT_TOL,
        stagnated: best.stagnated,
    })
}

/// Upper bound on `inf_{\|X\|=1} zeta(X)` where
/// `zeta(X) = 2^{-m} (<D1' X, X>^{m/2} - <D2' X, X>^{m/2})^2`,
/// `D1' = D1^{2 r alpha / m}` and `D2' = D2^{2 r (1 - alpha) / m}`,
/// found by multi-restart projected gradient descent. Always nonnegative.
pub fn inf_zeta(spec: &ZetaSpec, restarts: usize, seed: u64) -> Result<f64, LinalgError> {
    spec.validate()?;
    if restarts < 1 {
        return Err(LinalgError::BadScalar {
            name: "restarts",
            value: restarts as f64,
        });
    }
    let m = spec.m as f64;
    let a_mat = func_apply(&spec.d1, 2.0 * spec.r * spec.alpha / m)?;
    let b_mat = func_apply(&spec.d2, 2.0 * spec.r * (1.0 - spec.alpha) / m)?;
    let n = a_mat.rows();
    let half_m = 0.5 * m;
    let weight = 0.5f64.powi(spec.m as i32);

    let zeta = |x: &[Complex64]| -> f64 {
        let a = a_mat.quadratic_form(x).re.max(0.0);
        let b = b_mat.quadratic_form(x).re.max(0.0);
        let h = a.powf(half_m) - b.powf(half_m);
        weight * h * h
    };
    // Ascent on -zeta is descent on zeta.
    let value = |x: &[Complex64]| -zeta(x);
    let grad = |x: &[Complex64]| -> Vec<Complex64> {
        let ax = a_mat.matvec(x);
        let bx = b_mat.matvec(x);
        let a = inner(x, &ax).re.max(0.0);
        let b = inner(x, &bx).re.max(0.0);
        let h = a.powf(half_m) - b.powf(half_m);
        let da = if half_m < 1.0 && a < 1e-280 {
            0.0
        } else {
            half_m * a.powf(half_m - 1.0)
        };
        let db = if half_m < 1.0 && b < 1e-280 {
            0.0
        } else {
            half_m * b.powf(half_m - 1.0)
        };
        let scale = -weight * 2.0 * h;
        ax.iter()
            .zip(&bx)
            .map(|(&ai, &bi)| (ai * da - bi * db) * scale)
            .collect()
    };

    let best = best_of_restarts(n, restarts, seed, "zeta", |x0| {
        sphere_ascend(x0, &value, &grad)
    });
    Ok((-best.objective).max(0.0))
}

#[cfg(test)]
mod tests;
