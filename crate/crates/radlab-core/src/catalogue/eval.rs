//! Case evaluation: input validation, constraint checks, and the formula
//! of each case computed through the linalg/numrad/blockops layers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::blockops::{embed_offdiag, mu_eta};
use crate::linalg::{
    abs_spectrum, cartesian, hermitian_eigen, inner, op_norm, vec_norm, ComplexMatrix,
    HermitianSpectrum,
};
use crate::numrad::{inf_zeta, radius_theta_scan, wp_functional, RadiusEstimate, ZetaSpec};

use super::{
    descriptor, CaseError, CaseId, CaseInputs, CaseParams, CaseResult, CaseStatus, CaseWitness,
    InputShape, OptBudget,
};

const REL_TOL: f64 = 1e-7;
const UNIT_TOL: f64 = 1e-10;
const PSD_INPUT_TOL: f64 = 1e-8;
const NILPOTENT_TOL: f64 = 1e-10;

/// Evaluate one case at one parameter point.
pub fn evaluate_case(
    id: CaseId,
    inputs: &CaseInputs,
    params: &CaseParams,
    budget: &OptBudget,
) -> Result<CaseResult, CaseError> {
    let mut results =
        evaluate_case_sweep(id, inputs, core::slice::from_ref(params), budget)?;
    Ok(results.pop().unwrap())
}

/// Evaluate one case on fixed inputs under a sweep of parameter points,
/// sharing the expensive input-only intermediates. Each element is
/// bit-identical to the corresponding single [`evaluate_case`] call.
pub fn evaluate_case_sweep(
    id: CaseId,
    inputs: &CaseInputs,
    params_list: &[CaseParams],
    budget: &OptBudget,
) -> Result<Vec<CaseResult>, CaseError> {
    validate_inputs(id, inputs)?;
    let digest = digest_inputs(inputs);
    let mut ctx = EvalCtx::new(id, inputs, budget);
    params_list
        .iter()
        .map(|params| {
            check_constraints(id, params, budget.relax_p_ordering)?;
            eval_one(&mut ctx, params, digest)
        })
        .collect()
}

// ---------------------------------------------------------------------
// Status machinery

fn tolerance(rhs: f64) -> f64 {
    REL_TOL * rhs.abs().max(1.0)
}

fn classify(slack: f64, rhs: f64, soft_violation: bool) -> CaseStatus {
    let tol = tolerance(rhs);
    if slack < -tol {
        if soft_violation {
            CaseStatus::Inconclusive
        } else {
            CaseStatus::Violated
        }
    } else if slack.abs() <= tol {
        CaseStatus::Equality
    } else {
        CaseStatus::Holds
    }
}

struct Sides {
    lhs: f64,
    rhs: f64,
    mid: Option<f64>,
}

impl Sides {
    fn one_sided(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, mid: None }
    }

    fn two_sided(lower: f64, mid: f64, upper: f64) -> Self {
        Self {
            lhs: lower,
            rhs: upper,
            mid: Some(mid),
        }
    }

    /// The binding sub-relation of a `<=` case with several parts: the
    /// one with the smallest normalized slack.
    fn worst_le(parts: &[(f64, f64)]) -> Self {
        let mut best = parts[0];
        let mut best_key = f64::INFINITY;
        for &(l, r) in parts {
            let key = (r - l) / r.abs().max(1.0);
            if key < best_key {
                best_key = key;
                best = (l, r);
            }
        }
        Self::one_sided(best.0, best.1)
    }

    /// The binding sub-equality of an `=` case with several parts: the
    /// one with the largest normalized deviation.
    fn worst_eq(parts: &[(f64, f64)]) -> Self {
        let mut best = parts[0];
        let mut best_key = -1.0;
        for &(l, r) in parts {
            let key = (r - l).abs() / r.abs().max(1.0);
            if key > best_key {
                best_key = key;
                best = (l, r);
            }
        }
        Self::one_sided(best.0, best.1)
    }
}

// ---------------------------------------------------------------------
// Input digests (FNV-1a over the exact bit patterns)

struct Digest(u64);

impl Digest {
    fn new() -> Self {
        Self(0xcbf2_9ce4_8422_2325)
    }

    fn byte(&mut self, b: u8) {
        self.0 ^= b as u64;
        self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
    }

    fn u64(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.byte(b);
        }
    }

    fn f64(&mut self, v: f64) {
        self.u64(v.to_bits());
    }

    fn matrix(&mut self, m: &ComplexMatrix) {
        self.u64(m.rows() as u64);
        self.u64(m.cols() as u64);
        for z in m.entries() {
            self.f64(z.re);
            self.f64(z.im);
        }
    }

    fn vector(&mut self, v: &[Complex64]) {
        self.u64(v.len() as u64);
        for z in v {
            self.f64(z.re);
            self.f64(z.im);
        }
    }
}

fn digest_inputs(inputs: &CaseInputs) -> u64 {
    let mut d = Digest::new();
    match inputs {
        CaseInputs::Matrix(t) => {
            d.byte(1);
            d.matrix(t);
        }
        CaseInputs::Pair(p) => {
            d.byte(2);
            d.matrix(p.b());
            d.matrix(p.c());
        }
        CaseInputs::Scalars { a, b } => {
            d.byte(3);
            d.f64(*a);
            d.f64(*b);
        }
        CaseInputs::MatrixVector { t, x } => {
            d.byte(4);
            d.matrix(t);
            d.vector(x);
        }
        CaseInputs::MatrixVectors { t, x, y } => {
            d.byte(5);
            d.matrix(t);
            d.vector(x);
            d.vector(y);
        }
        CaseInputs::Pairs(ps) => {
            d.byte(6);
            d.u64(ps.len() as u64);
            for p in ps {
                d.matrix(p.b());
                d.matrix(p.c());
            }
        }
        CaseInputs::Matrices(ms) => {
            d.byte(7);
            d.u64(ms.len() as u64);
            for m in ms {
                d.matrix(m);
            }
        }
        CaseInputs::DiagBlocks { a, d: dd } => {
            d.byte(8);
            d.matrix(a);
            d.matrix(dd);
        }
        CaseInputs::FullBlocks { a, b, c, d: dd } => {
            d.byte(9);
            d.matrix(a);
            d.matrix(b);
            d.matrix(c);
            d.matrix(dd);
        }
    }
    d.0
}

// ---------------------------------------------------------------------
// Validation

fn bad(case: CaseId, reason: &'static str) -> CaseError {
    CaseError::BadInput { case, reason }
}

fn wrong(case: CaseId) -> CaseError {
    CaseError::WrongInputs {
        case,
        expected: descriptor(case).input_shape,
    }
}

fn check_unit(case: CaseId, x: &[Complex64], dim: usize) -> Result<(), CaseError> {
    if x.len() != dim {
        return Err(bad(case, "vector length must match the matrix size"));
    }
    if (vec_norm(x) - 1.0).abs() > UNIT_TOL {
        return Err(bad(case, "vector must be unit"));
    }
    Ok(())
}

fn check_psd(case: CaseId, m: &ComplexMatrix, what: &'static str) -> Result<(), CaseError> {
    let scale = m.frobenius_norm().max(1.0);
    if !m.is_square() || m.hermitian_deviation() > PSD_INPUT_TOL * scale {
        return Err(bad(case, what));
    }
    let spec = hermitian_eigen(m)?;
    if spec.min_eigenvalue() < -PSD_INPUT_TOL * scale {
        return Err(bad(case, what));
    }
    Ok(())
}

fn validate_inputs(id: CaseId, inputs: &CaseInputs) -> Result<(), CaseError> {
    let shape = descriptor(id).input_shape;
    match (shape, inputs) {
        (InputShape::SquareMatrix, CaseInputs::Matrix(t)) => {
            if !t.is_square() {
                return Err(bad(id, "matrix must be square"));
            }
        }
        (InputShape::NilpotentMatrix, CaseInputs::Matrix(t)) => {
            if !t.is_square() {
                return Err(bad(id, "matrix must be square"));
            }
            let sq = t * t;
            let scale = t.frobenius_norm();
            if sq.frobenius_norm() > NILPOTENT_TOL * (scale * scale).max(1.0) {
                return Err(bad(id, "matrix must satisfy T^2 = 0"));
            }
        }
        (InputShape::OffDiagPair, CaseInputs::Pair(_)) => {}
        (InputShape::SquarePair, CaseInputs::Pair(p)) => {
            let (n1, n2) = p.block_dims();
            if n1 != n2 {
                return Err(bad(id, "blocks must be square of equal size"));
            }
        }
        (InputShape::PsdPair, CaseInputs::Pair(p)) => {
            let (n1, n2) = p.block_dims();
            if n1 != n2 {
                return Err(bad(id, "blocks must act on one space"));
            }
            check_psd(id, p.b(), "block B must be Hermitian PSD")?;
            check_psd(id, p.c(), "block C must be Hermitian PSD")?;
        }
        (InputShape::ScalarPair, CaseInputs::Scalars { a, b }) => {
            if !(a.is_finite() && b.is_finite() && *a >= 0.0 && *b >= 0.0) {
                return Err(bad(id, "scalars must be finite and nonnegative"));
            }
        }
        (InputShape::PsdMatrixVector, CaseInputs::MatrixVector { t, x }) => {
            check_psd(id, t, "matrix must be Hermitian PSD")?;
            check_unit(id, x, t.rows())?;
        }
        (InputShape::HermitianMatrixVector, CaseInputs::MatrixVector { t, x }) => {
            let scale = t.frobenius_norm().max(1.0);
            if !t.is_square() || t.hermitian_deviation() > PSD_INPUT_TOL * scale {
                return Err(bad(id, "matrix must be Hermitian"));
            }
            check_unit(id, x, t.rows())?;
        }
        (InputShape::MatrixTwoVectors, CaseInputs::MatrixVectors { t, x, y }) => {
            if !t.is_square() {
                return Err(bad(id, "matrix must be square"));
            }
            check_unit(id, x, t.rows())?;
            check_unit(id, y, t.rows())?;
        }
        (InputShape::PairTuple, CaseInputs::Pairs(ps)) => {
            let first = ps.first().ok_or_else(|| bad(id, "tuple must be nonempty"))?;
            if ps.iter().any(|p| p.block_dims() != first.block_dims()) {
                return Err(bad(id, "pairs must share block dimensions"));
            }
        }
        (InputShape::MatrixTuple, CaseInputs::Matrices(ms)) => {
            let first = ms.first().ok_or_else(|| bad(id, "tuple must be nonempty"))?;
            if !first.is_square() || ms.iter().any(|m| m.shape() != first.shape()) {
                return Err(bad(id, "matrices must be square of one size"));
            }
        }
        (InputShape::TwoSquareMatrices, CaseInputs::DiagBlocks { a, d }) => {
            if !a.is_square() || !d.is_square() {
                return Err(bad(id, "blocks must be square"));
            }
        }
        (InputShape::FourSquareMatrices, CaseInputs::FullBlocks { a, b, c, d }) => {
            if !a.is_square()
                || [b, c, d].iter().any(|m| m.shape() != a.shape())
            {
                return Err(bad(id, "blocks must be square of one size"));
            }
        }
        _ => return Err(wrong(id)),
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Constraints

fn check_constraints(id: CaseId, pr: &CaseParams, relax_p_ordering: bool) -> Result<(), CaseError> {
    let fail = |constraint: &'static str| -> Result<(), CaseError> {
        Err(CaseError::ConstraintViolated {
            case: id,
            constraint,
        })
    };
    if !(pr.p.is_finite() && pr.q.is_finite() && pr.r.is_finite() && pr.alpha.is_finite()) {
        return fail("parameters must be finite");
    }
    let conjugate = (1.0 / pr.p + 1.0 / pr.q - 1.0).abs() <= 1e-12;
    let alpha_ok = (0.0..=1.0).contains(&pr.alpha);
    match id {
        CaseId::I1 | CaseId::I3 | CaseId::S4 | CaseId::E11 | CaseId::I19 => Ok(()),
        CaseId::I2 => {
            if pr.n_power < 1 {
                return fail("n >= 1");
            }
            Ok(())
        }
        CaseId::I4 | CaseId::I10 => {
            if pr.r < 1.0 {
                return fail("r >= 1");
            }
            let ordering_ok = if id == CaseId::I10 && relax_p_ordering {
                pr.p > 1.0 && pr.q > 1.0
            } else {
                pr.q > 1.0 && pr.p >= pr.q
            };
            if !ordering_ok {
                return fail("p >= q > 1");
            }
            if !conjugate {
                return fail("1/p + 1/q = 1");
            }
            if pr.p * pr.r < 2.0 {
                return fail("p r >= 2");
            }
            if !alpha_ok {
                return fail("0 <= a <= 1");
            }
            Ok(())
        }
        CaseId::S1 => {
            if !(pr.p > 1.0 && pr.q > 1.0) {
                return fail("p, q > 1");
            }
            if !conjugate {
                return fail("1/p + 1/q = 1");
            }
            if pr.r < 1.0 {
                return fail("r >= 1");
            }
            Ok(())
        }
        CaseId::S2 => {
            if !(pr.p > 1.0 && pr.q > 1.0) {
                return fail("p, q > 1");
            }
            if !conjugate {
                return fail("1/p + 1/q = 1");
            }
            if pr.m < 1 {
                return fail("m >= 1");
            }
            Ok(())
        }
        CaseId::S3 => {
            if pr.r <= 0.0 {
                return fail("r > 0");
            }
            Ok(())
        }
        CaseId::S5 => {
            if !alpha_ok {
                return fail("0 <= a <= 1");
            }
            Ok(())
        }
        CaseId::I12 => {
            if pr.r < 1.0 {
                return fail("r >= 1");
            }
            if !(pr.q > 1.0 && pr.p >= pr.q) {
                return fail("p >= q > 1");
            }
            if !conjugate {
                return fail("1/p + 1/q = 1");
            }
            if pr.p * pr.r < 1.0 {
                return fail("p r >= 1");
            }
            if !alpha_ok {
                return fail("0 <= a <= 1");
            }
            Ok(())
        }
        CaseId::I13 | CaseId::I14 => {
            if pr.r < 1.0 {
                return fail("r >= 1");
            }
            if !alpha_ok {
                return fail("0 <= a <= 1");
            }
            Ok(())
        }
        CaseId::I15 => {
            if pr.p < 2.0 {
                return fail("p >= 2");
            }
            if !alpha_ok {
                return fail("0 <= a <= 1");
            }
            Ok(())
        }
        CaseId::I16 => {
            if pr.p < 2.0 {
                return fail("p >= 2");
            }
            Ok(())
        }
        CaseId::I17 => {
            if pr.m < 1 {
                return fail("m >= 1");
            }
            if pr.p < pr.m as f64 {
                return fail("p >= m");
            }
            if pr.r < pr.m as f64 {
                return fail("r >= m");
            }
            if !alpha_ok {
                return fail("0 <= a <= 1");
            }
            Ok(())
        }
        CaseId::I18 => {
            if pr.r < 1.0 {
                return fail("r >= 1");
            }
            Ok(())
        }
        CaseId::I20s | CaseId::I20p | CaseId::E21 => {
            if pr.r < 2.0 {
                return fail("r >= 2");
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------
// Shared evaluation context

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    AbsB(u16),
    AbsBAdj(u16),
    AbsC(u16),
    AbsCAdj(u16),
    AbsA,
    AbsAAdj,
    AbsD,
    AbsDAdj,
    AbsMain,
    AbsMainAdj,
    AbsMainSq,
    AbsMainAdjSq,
    AbsSwPlus,
    AbsSwMinus,
    SpecMain,
}

struct EvalCtx<'a> {
    id: CaseId,
    inputs: &'a CaseInputs,
    budget: &'a OptBudget,
    main: Option<ComplexMatrix>,
    main_estimate: Option<RadiusEstimate>,
    main_norm: Option<f64>,
    radius_powers: BTreeMap<u32, f64>,
    spectra: BTreeMap<Slot, HermitianSpectrum>,
    wp: BTreeMap<u64, (f64, Option<Vec<Complex64>>)>,
}

impl<'a> EvalCtx<'a> {
    fn new(id: CaseId, inputs: &'a CaseInputs, budget: &'a OptBudget) -> Self {
        Self {
            id,
            inputs,
            budget,
            main: None,
            main_estimate: None,
            main_norm: None,
            radius_powers: BTreeMap::new(),
            spectra: BTreeMap::new(),
            wp: BTreeMap::new(),
        }
    }

    fn ensure_main(&mut self) {
        if self.main.is_some() {
            return;
        }
        let m = match self.inputs {
            CaseInputs::Matrix(t) => t.clone(),
            CaseInputs::MatrixVector { t, .. } => t.clone(),
            CaseInputs::MatrixVectors { t, .. } => t.clone(),
            CaseInputs::Pair(p) => embed_offdiag(p),
            CaseInputs::DiagBlocks { a, d } => a.direct_sum(d),
            CaseInputs::FullBlocks { a, b, c, d } => {
                let n = a.rows();
                ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
                    (true, true) => a[(i, j)],
                    (true, false) => b[(i, j - n)],
                    (false, true) => c[(i - n, j)],
                    (false, false) => d[(i - n, j - n)],
                })
            }
            _ => unreachable!("case {} has no principal matrix", self.id),
        };
        self.main = Some(m);
    }

    fn main_ref(&mut self) -> &ComplexMatrix {
        self.ensure_main();
        self.main.as_ref().unwrap()
    }

    fn radius(&mut self) -> Result<f64, CaseError> {
        if self.main_estimate.is_none() {
            self.ensure_main();
            let est = radius_theta_scan(self.main.as_ref().unwrap(), OptBudget::SCAN_TOL)?;
            self.main_estimate = Some(est);
        }
        Ok(self.main_estimate.as_ref().unwrap().value)
    }

    fn radius_power(&mut self, n: u32) -> Result<f64, CaseError> {
        if let Some(&w) = self.radius_powers.get(&n) {
            return Ok(w);
        }
        self.ensure_main();
        let powered = self.main.as_ref().unwrap().pow_int(n);
        let w = radius_theta_scan(&powered, OptBudget::SCAN_TOL)?.value;
        self.radius_powers.insert(n, w);
        Ok(w)
    }

    fn norm(&mut self) -> f64 {
        if self.main_norm.is_none() {
            self.ensure_main();
            self.main_norm = Some(op_norm(self.main.as_ref().unwrap()));
        }
        self.main_norm.unwrap()
    }

    fn block_b(&self, i: usize) -> &ComplexMatrix {
        match self.inputs {
            CaseInputs::Pair(p) => p.b(),
            CaseInputs::Pairs(ps) => ps[i].b(),
            CaseInputs::Matrices(ms) => &ms[i],
            CaseInputs::FullBlocks { b, .. } => b,
            _ => unreachable!(),
        }
    }

    fn block_c(&self, i: usize) -> &ComplexMatrix {
        match self.inputs {
            CaseInputs::Pair(p) => p.c(),
            CaseInputs::Pairs(ps) => ps[i].c(),
            CaseInputs::FullBlocks { c, .. } => c,
            _ => unreachable!(),
        }
    }

    fn build_slot(&mut self, slot: Slot) -> ComplexMatrix {
        match slot {
            Slot::AbsB(i) => self.block_b(i as usize).clone(),
            Slot::AbsBAdj(i) => self.block_b(i as usize).adjoint(),
            Slot::AbsC(i) => self.block_c(i as usize).clone(),
            Slot::AbsCAdj(i) => self.block_c(i as usize).adjoint(),
            Slot::AbsA => match self.inputs {
                CaseInputs::DiagBlocks { a, .. } => a.clone(),
                CaseInputs::FullBlocks { a, .. } => a.clone(),
                _ => unreachable!(),
            },
            Slot::AbsAAdj => self.build_slot(Slot::AbsA).adjoint(),
            Slot::AbsD => match self.inputs {
                CaseInputs::DiagBlocks { d, .. } => d.clone(),
                CaseInputs::FullBlocks { d, .. } => d.clone(),
                _ => unreachable!(),
            },
            Slot::AbsDAdj => self.build_slot(Slot::AbsD).adjoint(),
            Slot::AbsMain | Slot::SpecMain => self.main_ref().clone(),
            Slot::AbsMainAdj => self.main_ref().adjoint(),
            Slot::AbsMainSq => {
                let m = self.main_ref();
                m * m
            }
            Slot::AbsMainAdjSq => {
                let m = self.main_ref().adjoint();
                &m * &m
            }
            Slot::AbsSwPlus => {
                let parts = cartesian(self.main_ref()).unwrap();
                &parts.real_part + &parts.imag_part
            }
            Slot::AbsSwMinus => {
                let parts = cartesian(self.main_ref()).unwrap();
                &parts.real_part - &parts.imag_part
            }
        }
    }

    /// `|M|^e` (or `M^e` for the plain-spectrum slot) with the slot's
    /// spectrum computed once per context.
    fn abs_pow(&mut self, slot: Slot, e: f64) -> Result<ComplexMatrix, CaseError> {
        if !self.spectra.contains_key(&slot) {
            let m = self.build_slot(slot);
            let spec = match slot {
                Slot::SpecMain => hermitian_eigen(&m)?,
                _ => abs_spectrum(&m)?,
            };
            self.spectra.insert(slot, spec);
        }
        Ok(self.spectra[&slot].apply_power(e))
    }

    fn wp(&mut self, p: f64) -> Result<(f64, Option<Vec<Complex64>>), CaseError> {
        let key = p.to_bits();
        if let Some(v) = self.wp.get(&key) {
            return Ok(v.clone());
        }
        let ts: Vec<ComplexMatrix> = match self.inputs {
            CaseInputs::Pairs(ps) => ps.iter().map(embed_offdiag).collect(),
            CaseInputs::Matrices(ms) => ms.clone(),
            _ => unreachable!(),
        };
        let est = wp_functional(&ts, p, self.budget.restarts, self.budget.seed)?;
        let out = (est.value, est.witness_vector);
        self.wp.insert(key, out.clone());
        Ok(out)
    }

    fn scan_witness(&self) -> (Option<f64>, Option<Vec<Complex64>>) {
        match &self.main_estimate {
            Some(est) => (est.witness_theta, est.witness_vector.clone()),
            None => (None, None),
        }
    }
}

// ---------------------------------------------------------------------
// Per-case formulas

fn eval_one(
    ctx: &mut EvalCtx,
    params: &CaseParams,
    digest: u64,
) -> Result<CaseResult, CaseError> {
    let pr = params;
    let (p, q, r, alpha) = (pr.p, pr.q, pr.r, pr.alpha);
    let mut soft_violation = false;
    let mut witness_vector_override: Option<Vec<Complex64>> = None;

    let sides = match ctx.id {
        CaseId::I1 => {
            let w = ctx.radius()?;
            let n = ctx.norm();
            Sides::two_sided(0.5 * n, w, n)
        }
        CaseId::I2 => {
            let w = ctx.radius()?;
            let wn = ctx.radius_power(pr.n_power)?;
            Sides::one_sided(wn, w.powi(pr.n_power as i32))
        }
        CaseId::I3 => {
            let w = ctx.radius()?;
            let sum = &ctx.abs_pow(Slot::AbsMain, 1.0)? + &ctx.abs_pow(Slot::AbsMainAdj, 1.0)?;
            Sides::one_sided(w, 0.5 * op_norm(&sum))
        }
        CaseId::I4 => {
            let w = ctx.radius()?;
            let nrm = ctx.norm();
            let term = &ctx
                .abs_pow(Slot::AbsMainSq, alpha * p * r)?
                .scaled_re(1.0 / p)
                + &ctx
                    .abs_pow(Slot::AbsMainAdjSq, (1.0 - alpha) * q * r)?
                    .scaled_re(1.0 / q);
            let rhs = 0.5 * (nrm.powf(2.0 * r) + op_norm(&term));
            Sides::one_sided(w.powf(2.0 * r), rhs)
        }
        CaseId::S1 => {
            let (a, b) = ctx.scalars();
            let lower = a * b;
            let mid = a.powf(p) / p + b.powf(q) / q;
            let upper = (a.powf(p * r) / p + b.powf(q * r) / q).powf(1.0 / r);
            Sides::two_sided(lower, mid, upper)
        }
        CaseId::S2 => {
            let (a, b) = ctx.scalars();
            let m = pr.m as f64;
            let lhs = (a.powf(1.0 / p) * b.powf(1.0 / q)).powf(m)
                + pr.r0().powf(m) * (a.powf(m / 2.0) - b.powf(m / 2.0)).powi(2);
            let rhs = (a / p + b / q).powf(m);
            Sides::one_sided(lhs, rhs)
        }
        CaseId::S3 => {
            let (t, x) = ctx.matrix_vector();
            let tv = t.quadratic_form(x).re.max(0.0);
            let tr = ctx.abs_pow(Slot::SpecMain, r)?;
            let (_, x) = ctx.matrix_vector();
            let trx = tr.quadratic_form(x).re;
            if r >= 1.0 {
                Sides::one_sided(tv.powf(r), trx)
            } else {
                Sides::one_sided(trx, tv.powf(r))
            }
        }
        CaseId::S4 => {
            let (t, x) = ctx.matrix_vector();
            let lhs = t.quadratic_form(x).norm();
            let abs_t = ctx.abs_pow(Slot::AbsMain, 1.0)?;
            let (_, x) = ctx.matrix_vector();
            Sides::one_sided(lhs, abs_t.quadratic_form(x).re)
        }
        CaseId::S5 => {
            let (t, x, y) = ctx.matrix_vectors();
            let m_val = inner(y, &t.matvec(x)).norm();
            let fx = ctx.abs_pow(Slot::AbsMain, alpha)?;
            let gy = ctx.abs_pow(Slot::AbsMainAdj, 1.0 - alpha)?;
            let f2x = ctx.abs_pow(Slot::AbsMain, 2.0 * alpha)?;
            let g2y = ctx.abs_pow(Slot::AbsMainAdj, 2.0 * (1.0 - alpha))?;
            let (_, x, y) = ctx.matrix_vectors();
            let part_a = (
                m_val,
                vec_norm(&fx.matvec(x)) * vec_norm(&gy.matvec(y)),
            );
            let part_b = (
                m_val * m_val,
                f2x.quadratic_form(x).re.max(0.0) * g2y.quadratic_form(y).re.max(0.0),
            );
            Sides::worst_le(&[part_a, part_b])
        }
        CaseId::I10 => {
            let w = ctx.radius()?;
            let rhs = ctx.weighted_pair_max(alpha * p * r, (1.0 - alpha) * q * r, 1.0 / p, 1.0 / q)?;
            Sides::one_sided(w.powf(r), rhs)
        }
        CaseId::E11 => {
            let w = ctx.radius()?;
            let (b, c) = match ctx.inputs {
                CaseInputs::Pair(pair) => (pair.b(), pair.c()),
                _ => unreachable!(),
            };
            Sides::one_sided(w, 0.5 * op_norm(&(b + c)))
        }
        CaseId::I12 => {
            let w = ctx.radius()?;
            let rhs = ctx.weighted_pair_max(
                2.0 * alpha * p * r,
                2.0 * (1.0 - alpha) * q * r,
                1.0 / p,
                1.0 / q,
            )?;
            Sides::one_sided(w.powf(2.0 * r), rhs)
        }
        CaseId::I13 => {
            let w = ctx.radius()?;
            let rhs =
                0.5 * ctx.weighted_pair_max(4.0 * r * alpha, 4.0 * r * (1.0 - alpha), 1.0, 1.0)?;
            Sides::one_sided(w.powf(2.0 * r), rhs)
        }
        CaseId::I14 => {
            let w = ctx.radius()?;
            let sum = &ctx.abs_pow(Slot::AbsMain, 4.0 * r * alpha)?
                + &ctx.abs_pow(Slot::AbsMainAdj, 4.0 * r * (1.0 - alpha))?;
            Sides::one_sided(w.powf(2.0 * r), 0.5 * op_norm(&sum))
        }
        CaseId::I15 => {
            let (wp_val, wit) = ctx.wp(p)?;
            witness_vector_override = wit;
            let count = match ctx.inputs {
                CaseInputs::Pairs(ps) => ps.len(),
                _ => unreachable!(),
            };
            let mut sum1: Option<ComplexMatrix> = None;
            let mut sum2: Option<ComplexMatrix> = None;
            for i in 0..count {
                let t1 = &ctx.abs_pow(Slot::AbsC(i as u16), p)?.scaled_re(alpha)
                    + &ctx
                        .abs_pow(Slot::AbsBAdj(i as u16), p)?
                        .scaled_re(1.0 - alpha);
                let t2 = &ctx.abs_pow(Slot::AbsB(i as u16), p)?.scaled_re(alpha)
                    + &ctx
                        .abs_pow(Slot::AbsCAdj(i as u16), p)?
                        .scaled_re(1.0 - alpha);
                sum1 = Some(match sum1 {
                    None => t1,
                    Some(s) => &s + &t1,
                });
                sum2 = Some(match sum2 {
                    None => t2,
                    Some(s) => &s + &t2,
                });
            }
            let rhs = op_norm(&sum1.unwrap()).max(op_norm(&sum2.unwrap()));
            Sides::one_sided(wp_val.powf(p), rhs)
        }
        CaseId::I16 => {
            let (wp_val, wit) = ctx.wp(p)?;
            witness_vector_override = wit;
            let count = match ctx.inputs {
                CaseInputs::Matrices(ms) => ms.len(),
                _ => unreachable!(),
            };
            let mut sum: Option<ComplexMatrix> = None;
            for i in 0..count {
                let term = &ctx.abs_pow(Slot::AbsB(i as u16), p)?
                    + &ctx.abs_pow(Slot::AbsBAdj(i as u16), p)?;
                sum = Some(match sum {
                    None => term,
                    Some(s) => &s + &term,
                });
            }
            Sides::one_sided(wp_val.powf(p), 0.5 * op_norm(&sum.unwrap()))
        }
        CaseId::I17 => {
            soft_violation = true;
            let w = ctx.radius()?;
            let m = pr.m as f64;
            let ef = 2.0 * r * alpha / m;
            let eg = 2.0 * r * (1.0 - alpha) / m;
            let t1 = op_norm(
                &(&ctx.abs_pow(Slot::AbsC(0), ef)? + &ctx.abs_pow(Slot::AbsBAdj(0), eg)?),
            );
            let t2 = op_norm(
                &(&ctx.abs_pow(Slot::AbsB(0), ef)? + &ctx.abs_pow(Slot::AbsCAdj(0), eg)?),
            );
            let d1 = ctx
                .abs_pow(Slot::AbsC(0), 1.0)?
                .direct_sum(&ctx.abs_pow(Slot::AbsB(0), 1.0)?);
            let d2 = ctx
                .abs_pow(Slot::AbsBAdj(0), 1.0)?
                .direct_sum(&ctx.abs_pow(Slot::AbsCAdj(0), 1.0)?);
            let zeta_spec = ZetaSpec {
                d1,
                d2,
                m: pr.m,
                r,
                alpha,
            };
            let inf = inf_zeta(&zeta_spec, ctx.budget.restarts, ctx.budget.seed)?;
            let rhs = 0.5f64.powi(pr.m as i32) * t1.max(t2).powf(m) - inf;
            Sides::one_sided(w.powf(r), rhs)
        }
        CaseId::I18 => {
            let w = ctx.radius()?;
            let ta = &ctx.abs_pow(Slot::AbsA, r)? + &ctx.abs_pow(Slot::AbsAAdj, r)?;
            let td = &ctx.abs_pow(Slot::AbsD, r)? + &ctx.abs_pow(Slot::AbsDAdj, r)?;
            Sides::one_sided(w.powf(r), 0.5 * op_norm(&ta).max(op_norm(&td)))
        }
        CaseId::I19 => {
            let w = ctx.radius()?;
            let off = op_norm(&(&ctx.abs_pow(Slot::AbsC(0), 1.0)? + &ctx.abs_pow(Slot::AbsBAdj(0), 1.0)?))
                .max(op_norm(
                    &(&ctx.abs_pow(Slot::AbsB(0), 1.0)? + &ctx.abs_pow(Slot::AbsCAdj(0), 1.0)?),
                ));
            let diag = op_norm(&(&ctx.abs_pow(Slot::AbsA, 1.0)? + &ctx.abs_pow(Slot::AbsAAdj, 1.0)?))
                .max(op_norm(
                    &(&ctx.abs_pow(Slot::AbsD, 1.0)? + &ctx.abs_pow(Slot::AbsDAdj, 1.0)?),
                ));
            Sides::one_sided(w, 0.5 * off + 0.5 * diag)
        }
        CaseId::I20s | CaseId::I20p => {
            let pair = match ctx.inputs {
                CaseInputs::Pair(pair) => pair,
                _ => unreachable!(),
            };
            let (mu, eta) = mu_eta(pair, r)?;
            let mx = op_norm(&mu).max(op_norm(&eta));
            let w = ctx.radius()?;
            let lower_const = if ctx.id == CaseId::I20s {
                2.0f64.powf(-1.5 * (r - 1.0))
            } else {
                2.0f64.powf(-1.5 * r - 2.0)
            };
            let upper_const = 0.5f64.powf(r + 1.0);
            Sides::two_sided(lower_const * mx, w.powf(r), upper_const * mx)
        }
        CaseId::E21 => {
            let w = ctx.radius()?;
            let nrm = ctx.norm();
            let main = ctx.main_ref().clone();
            let cross = op_norm(&(&main.gram() + &main.cogram()));
            let sw = &ctx.abs_pow(Slot::AbsSwPlus, r)? + &ctx.abs_pow(Slot::AbsSwMinus, r)?;
            let parts = [
                (w, 0.5 * nrm),
                (cross, nrm * nrm),
                (op_norm(&sw), 2.0f64.powf(1.0 - r / 2.0) * nrm.powf(r)),
            ];
            Sides::worst_eq(&parts)
        }
    };

    let slack = match sides.mid {
        None => sides.rhs - sides.lhs,
        Some(mid) => (mid - sides.lhs).min(sides.rhs - mid),
    };
    let status = classify(slack, sides.rhs, soft_violation);
    let (theta, scan_vec) = ctx.scan_witness();
    let vector = witness_vector_override.or(scan_vec);
    Ok(CaseResult {
        case_id: ctx.id,
        lhs: sides.lhs,
        rhs: sides.rhs,
        mid: sides.mid,
        slack,
        status,
        witness: CaseWitness {
            inputs_digest: digest,
            theta,
            vector,
        },
        params: *params,
    })
}

impl<'a> EvalCtx<'a> {
    fn scalars(&self) -> (f64, f64) {
        match self.inputs {
            CaseInputs::Scalars { a, b } => (*a, *b),
            _ => unreachable!(),
        }
    }

    fn matrix_vector(&self) -> (&ComplexMatrix, &[Complex64]) {
        match self.inputs {
            CaseInputs::MatrixVector { t, x } => (t, x),
            _ => unreachable!(),
        }
    }

    fn matrix_vectors(&self) -> (&ComplexMatrix, &[Complex64], &[Complex64]) {
        match self.inputs {
            CaseInputs::MatrixVectors { t, x, y } => (t, x, y),
            _ => unreachable!(),
        }
    }

    /// `max(|| w1 |C|^e1 + w2 |B*|^e2 ||, || w1 |B|^e1 + w2 |C*|^e2 ||)`.
    fn weighted_pair_max(
        &mut self,
        e1: f64,
        e2: f64,
        w1: f64,
        w2: f64,
    ) -> Result<f64, CaseError> {
        let m1 = &self.abs_pow(Slot::AbsC(0), e1)?.scaled_re(w1)
            + &self.abs_pow(Slot::AbsBAdj(0), e2)?.scaled_re(w2);
        let m2 = &self.abs_pow(Slot::AbsB(0), e1)?.scaled_re(w1)
            + &self.abs_pow(Slot::AbsCAdj(0), e2)?.scaled_re(w2);
        Ok(op_norm(&m1).max(op_norm(&m2)))
    }
}
