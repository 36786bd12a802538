//! Every inequality and equality of the suite as a named, parameterized,
//! machine-checkable case.
//!
//! A case takes concrete matrix/scalar inputs plus a [`CaseParams`] point,
//! evaluates both sides of its relation exactly as displayed, and returns
//! a [`CaseResult`] carrying LHS, RHS, slack, a status, and a witness.
//! [`evaluate_case_sweep`] evaluates one input instance under many
//! parameter points while sharing the expensive intermediates (the radius
//! of the assembled operator, absolute-value spectra); its per-point
//! results are bit-identical to independent [`evaluate_case`] calls.
//!
//! Status semantics: `violated` iff `slack < -tol`, `equality` iff
//! `|slack| <= tol`, with `tol = 1e-7 * max(1, |rhs|)`. Two cases need
//! care: the RHS of `I17` subtracts a best-found upper bound on an
//! infimum, so a negative slack there is reported `inconclusive`, never
//! `violated`; and `I20s` states a lower constant that concrete scalar
//! instances violate (see the case list), which the suite records as a
//! finding rather than "fixing" silently — `I20p` carries the constant
//! the two-sided bound supports.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::blockops::OffDiagonalPair;
use crate::linalg::{ComplexMatrix, LinalgError};

mod eval;

/// Stable identifiers for the cases, in catalogue order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[allow(clippy::upper_case_acronyms)]
pub enum CaseId {
    I1,
    I2,
    I3,
    I4,
    S1,
    S2,
    S3,
    S4,
    S5,
    I10,
    E11,
    I12,
    I13,
    I14,
    I15,
    I16,
    I17,
    I18,
    I19,
    I20s,
    I20p,
    E21,
}

impl CaseId {
    pub const ALL: [CaseId; 22] = [
        CaseId::I1,
        CaseId::I2,
        CaseId::I3,
        CaseId::I4,
        CaseId::S1,
        CaseId::S2,
        CaseId::S3,
        CaseId::S4,
        CaseId::S5,
        CaseId::I10,
        CaseId::E11,
        CaseId::I12,
        CaseId::I13,
        CaseId::I14,
        CaseId::I15,
        CaseId::I16,
        CaseId::I17,
        CaseId::I18,
        CaseId::I19,
        CaseId::I20s,
        CaseId::I20p,
        CaseId::E21,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseId::I1 => "I1",
            CaseId::I2 => "I2",
            CaseId::I3 => "I3",
            CaseId::I4 => "I4",
            CaseId::S1 => "S1",
            CaseId::S2 => "S2",
            CaseId::S3 => "S3",
            CaseId::S4 => "S4",
            CaseId::S5 => "S5",
            CaseId::I10 => "I10",
            CaseId::E11 => "E11",
            CaseId::I12 => "I12",
            CaseId::I13 => "I13",
            CaseId::I14 => "I14",
            CaseId::I15 => "I15",
            CaseId::I16 => "I16",
            CaseId::I17 => "I17",
            CaseId::I18 => "I18",
            CaseId::I19 => "I19",
            CaseId::I20s => "I20s",
            CaseId::I20p => "I20p",
            CaseId::E21 => "E21",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = CaseError;
    fn from_str(s: &str) -> Result<Self, CaseError> {
        CaseId::ALL
            .iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| CaseError::UnknownCase(String::from(s)))
    }
}

/// Relation a case asserts between its sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Relation {
    /// `lhs <= rhs`.
    LessEq,
    /// `lhs = rhs`.
    Equality,
    /// `lhs <= mid <= rhs` (a two-sided sandwich; `mid` is reported).
    TwoSided,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::LessEq => "<=",
            Relation::Equality => "=",
            Relation::TwoSided => "two-sided",
        })
    }
}

/// What shape of inputs a case consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum InputShape {
    /// One square matrix.
    SquareMatrix,
    /// Off-diagonal pair `(B, C)`, rectangular blocks allowed.
    OffDiagPair,
    /// Off-diagonal pair with square blocks of equal size.
    SquarePair,
    /// Off-diagonal pair of PSD blocks on the same space.
    PsdPair,
    /// Two nonnegative scalars.
    ScalarPair,
    /// A PSD matrix and a unit vector.
    PsdMatrixVector,
    /// A Hermitian matrix and a unit vector.
    HermitianMatrixVector,
    /// A matrix and two unit vectors.
    MatrixTwoVectors,
    /// A tuple of off-diagonal pairs with common block dimensions.
    PairTuple,
    /// A tuple of square matrices of one common size.
    MatrixTuple,
    /// Two square matrices (sizes may differ).
    TwoSquareMatrices,
    /// Four square matrices of one common size.
    FourSquareMatrices,
    /// One square matrix with `T^2 = 0`.
    NilpotentMatrix,
}

impl fmt::Display for InputShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputShape::SquareMatrix => "square matrix T",
            InputShape::OffDiagPair => "off-diagonal pair (B, C)",
            InputShape::SquarePair => "square equal-size pair (B, C)",
            InputShape::PsdPair => "PSD pair (B, C) on one space",
            InputShape::ScalarPair => "scalars a, b >= 0",
            InputShape::PsdMatrixVector => "PSD matrix T and unit vector x",
            InputShape::HermitianMatrixVector => "Hermitian matrix T and unit vector x",
            InputShape::MatrixTwoVectors => "matrix T and unit vectors x, y",
            InputShape::PairTuple => "tuple of off-diagonal pairs",
            InputShape::MatrixTuple => "tuple of square matrices",
            InputShape::TwoSquareMatrices => "square matrices A and D",
            InputShape::FourSquareMatrices => "square matrices A, B, C, D",
            InputShape::NilpotentMatrix => "square matrix T with T^2 = 0",
        })
    }
}

/// One catalogue entry.
#[derive(Debug, Clone, Copy)]
pub struct CaseDescriptor {
    pub id: CaseId,
    /// The relation in plain text, with `a` standing for alpha and the
    /// power family `f(t) = t^a`, `g(t) = t^(1-a)` already substituted.
    pub statement: &'static str,
    pub relation: Relation,
    pub input_shape: InputShape,
    pub constraints: &'static [&'static str],
}

/// The full case list, in stable order.
pub fn list_cases() -> &'static [CaseDescriptor] {
    &CATALOGUE
}

/// Descriptor for one case.
pub fn descriptor(id: CaseId) -> &'static CaseDescriptor {
    &CATALOGUE[CaseId::ALL.iter().position(|&c| c == id).unwrap()]
}

static CATALOGUE: [CaseDescriptor; 22] = [
    CaseDescriptor {
        id: CaseId::I1,
        statement: "||T||/2 <= w(T) <= ||T||",
        relation: Relation::TwoSided,
        input_shape: InputShape::SquareMatrix,
        constraints: &[],
    },
    CaseDescriptor {
        id: CaseId::I2,
        statement: "w(T^n) <= w(T)^n",
        relation: Relation::LessEq,
        input_shape: InputShape::SquareMatrix,
        constraints: &["n >= 1"],
    },
    CaseDescriptor {
        id: CaseId::I3,
        statement: "w(T) <= || |T| + |T*| || / 2",
        relation: Relation::LessEq,
        input_shape: InputShape::SquareMatrix,
        constraints: &[],
    },
    CaseDescriptor {
        id: CaseId::I4,
        statement: "w(A)^(2r) <= (||A||^(2r) + || |A^2|^(a p r)/p + |(A*)^2|^((1-a) q r)/q ||) / 2",
        relation: Relation::LessEq,
        input_shape: InputShape::SquareMatrix,
        constraints: &["r >= 1", "p >= q > 1", "1/p + 1/q = 1", "p r >= 2", "0 <= a <= 1"],
    },
    CaseDescriptor {
        id: CaseId::S1,
        statement: "a b <= a^p/p + b^q/q <= (a^(p r)/p + b^(q r)/q)^(1/r)",
        relation: Relation::TwoSided,
        input_shape: InputShape::ScalarPair,
        constraints: &["p, q > 1", "1/p + 1/q = 1", "r >= 1"],
    },
    CaseDescriptor {
        id: CaseId::S2,
        statement: "(a^(1/p) b^(1/q))^m + r0^m (a^(m/2) - b^(m/2))^2 <= (a/p + b/q)^m",
        relation: Relation::LessEq,
        input_shape: InputShape::ScalarPair,
        constraints: &["p, q > 1", "1/p + 1/q = 1", "m >= 1"],
    },
    CaseDescriptor {
        id: CaseId::S3,
        statement: "<Tx,x>^r <= <T^r x,x> for r >= 1, reversed for 0 < r <= 1",
        relation: Relation::LessEq,
        input_shape: InputShape::PsdMatrixVector,
        constraints: &["r > 0"],
    },
    CaseDescriptor {
        id: CaseId::S4,
        statement: "|<Tx,x>| <= <|T|x,x>",
        relation: Relation::LessEq,
        input_shape: InputShape::HermitianMatrixVector,
        constraints: &[],
    },
    CaseDescriptor {
        id: CaseId::S5,
        statement: "|<Tx,y>| <= || |T|^a x || || |T*|^(1-a) y ||  and  |<Tx,y>|^2 <= <|T|^(2a)x,x> <|T*|^(2(1-a))y,y>",
        relation: Relation::LessEq,
        input_shape: InputShape::MatrixTwoVectors,
        constraints: &["0 <= a <= 1"],
    },
    CaseDescriptor {
        id: CaseId::I10,
        statement: "w(T)^r <= max(|| |C|^(a p r)/p + |B*|^((1-a) q r)/q ||, || |B|^(a p r)/p + |C*|^((1-a) q r)/q ||)",
        relation: Relation::LessEq,
        input_shape: InputShape::OffDiagPair,
        constraints: &["r >= 1", "p >= q > 1", "1/p + 1/q = 1", "p r >= 2", "0 <= a <= 1"],
    },
    CaseDescriptor {
        id: CaseId::E11,
        statement: "w(T) = ||B + C|| / 2 for PSD blocks",
        relation: Relation::Equality,
        input_shape: InputShape::PsdPair,
        constraints: &[],
    },
    CaseDescriptor {
        id: CaseId::I12,
        statement: "w(T)^(2r) <= max(|| |C|^(2 a p r)/p + |B*|^(2 (1-a) q r)/q ||, || |B|^(2 a p r)/p + |C*|^(2 (1-a) q r)/q ||)",
        relation: Relation::LessEq,
        input_shape: InputShape::OffDiagPair,
        constraints: &["r >= 1", "p >= q > 1", "1/p + 1/q = 1", "p r >= 1", "0 <= a <= 1"],
    },
    CaseDescriptor {
        id: CaseId::I13,
        statement: "w(T)^(2r) <= max(|| |C|^(4 r a) + |B*|^(4 r (1-a)) ||, || |B|^(4 r a) + |C*|^(4 r (1-a)) ||) / 2",
        relation: Relation::LessEq,
        input_shape: InputShape::OffDiagPair,
        constraints: &["r >= 1", "0 <= a <= 1"],
    },
    CaseDescriptor {
        id: CaseId::I14,
        statement: "w(B)^(2r) <= || |B|^(4 r a) + |B*|^(4 r (1-a)) || / 2",
        relation: Relation::LessEq,
        input_shape: InputShape::SquareMatrix,
        constraints: &["r >= 1", "0 <= a <= 1"],
    },
    CaseDescriptor {
        id: CaseId::I15,
        statement: "w_p(T_1..T_n)^p <= max(|| sum_i a |C_i|^p + (1-a) |B_i*|^p ||, || sum_i a |B_i|^p + (1-a) |C_i*|^p ||)",
        relation: Relation::LessEq,
        input_shape: InputShape::PairTuple,
        constraints: &["p >= 2", "0 <= a <= 1"],
    },
    CaseDescriptor {
        id: CaseId::I16,
        statement: "w_p(B_1..B_n)^p <= || sum_i |B_i|^p + |B_i*|^p || / 2",
        relation: Relation::LessEq,
        input_shape: InputShape::MatrixTuple,
        constraints: &["p >= 2"],
    },
    CaseDescriptor {
        id: CaseId::I17,
        statement: "w(T)^r <= max(|| |C|^(2 r a / m) + |B*|^(2 r (1-a) / m) ||^m, || |B|^(2 r a / m) + |C*|^(2 r (1-a) / m) ||^m) / 2^m - inf zeta",
        relation: Relation::LessEq,
        input_shape: InputShape::OffDiagPair,
        constraints: &["m >= 1", "p >= m", "r >= m", "0 <= a <= 1"],
    },
    CaseDescriptor {
        id: CaseId::I18,
        statement: "w(diag(A, D))^r <= max(|| |A|^r + |A*|^r ||, || |D|^r + |D*|^r ||) / 2",
        relation: Relation::LessEq,
        input_shape: InputShape::TwoSquareMatrices,
        constraints: &["r >= 1"],
    },
    CaseDescriptor {
        id: CaseId::I19,
        statement: "w([[A,B],[C,D]]) <= max(|| |C| + |B*| ||, || |B| + |C*| ||)/2 + max(|| |A| + |A*| ||, || |D| + |D*| ||)/2",
        relation: Relation::LessEq,
        input_shape: InputShape::FourSquareMatrices,
        constraints: &[],
    },
    CaseDescriptor {
        id: CaseId::I20s,
        statement: "2^(-3(r-1)/2) max(||mu||, ||eta||) <= w(T)^r <= 2^(-(r+1)) max(||mu||, ||eta||)  [stated lower constant; violated by scalar instances]",
        relation: Relation::TwoSided,
        input_shape: InputShape::SquarePair,
        constraints: &["r >= 2"],
    },
    CaseDescriptor {
        id: CaseId::I20p,
        statement: "2^(-3r/2 - 2) max(||mu||, ||eta||) <= w(T)^r <= 2^(-(r+1)) max(||mu||, ||eta||)",
        relation: Relation::TwoSided,
        input_shape: InputShape::SquarePair,
        constraints: &["r >= 2"],
    },
    CaseDescriptor {
        id: CaseId::E21,
        statement: "T^2 = 0 implies w(T) = ||T||/2, ||T*T + TT*|| = ||T||^2, || |S+W|^r + |S-W|^r || = 2^(1 - r/2) ||T||^r",
        relation: Relation::Equality,
        input_shape: InputShape::NilpotentMatrix,
        constraints: &["r >= 2"],
    },
];

/// Parameter point for a case evaluation. `q` is always the conjugate
/// exponent of `p`; use [`CaseParams::with_p`] to keep them consistent.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CaseParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub alpha: f64,
    pub m: u32,
    pub n_power: u32,
}

impl CaseParams {
    /// Derived `r0 = min(1/p, 1/q)`.
    pub fn r0(&self) -> f64 {
        (1.0 / self.p).min(1.0 / self.q)
    }

    /// Set `p` and derive the conjugate `q = p / (p - 1)`.
    pub fn with_p(mut self, p: f64) -> Self {
        assert!(p > 1.0, "p must exceed 1");
        self.p = p;
        self.q = p / (p - 1.0);
        self
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.m = m;
        self
    }

    pub fn with_n_power(mut self, n: u32) -> Self {
        self.n_power = n;
        self
    }
}

impl Default for CaseParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            q: 2.0,
            r: 1.0,
            alpha: 0.5,
            m: 1,
            n_power: 2,
        }
    }
}

/// Optimizer settings for the best-found extrema used by some cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptBudget {
    /// Restarts for the projected-gradient searches.
    pub restarts: usize,
    /// Seed for the searches' start vectors.
    pub seed: u64,
    /// Probe switch: relax `I10`'s `p >= q > 1` constraint to
    /// `p, q > 1`, to test empirically whether the ordering matters.
    /// Off by default; the stated constraint is enforced.
    #[cfg_attr(feature = "serde", serde(default))]
    pub relax_p_ordering: bool,
}

impl OptBudget {
    /// Angle-scan tolerance recorded on radius estimates.
    pub const SCAN_TOL: f64 = 1e-9;
}

impl Default for OptBudget {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0x5241_444c_4142,
            relax_p_ordering: false,
        }
    }
}

/// Concrete inputs for one case instance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CaseInputs {
    /// A single square matrix (also used for the nilpotent case).
    Matrix(ComplexMatrix),
    /// An off-diagonal pair.
    Pair(OffDiagonalPair),
    /// Two nonnegative scalars.
    Scalars { a: f64, b: f64 },
    /// A matrix and one unit vector.
    MatrixVector {
        t: ComplexMatrix,
        x: Vec<Complex64>,
    },
    /// A matrix and two unit vectors.
    MatrixVectors {
        t: ComplexMatrix,
        x: Vec<Complex64>,
        y: Vec<Complex64>,
    },
    /// A tuple of off-diagonal pairs.
    Pairs(Vec<OffDiagonalPair>),
    /// A tuple of square matrices.
    Matrices(Vec<ComplexMatrix>),
    /// Diagonal blocks `A`, `D`.
    DiagBlocks { a: ComplexMatrix, d: ComplexMatrix },
    /// Full 2x2 block matrix data.
    FullBlocks {
        a: ComplexMatrix,
        b: ComplexMatrix,
        c: ComplexMatrix,
        d: ComplexMatrix,
    },
}

/// Evaluation status of one case instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CaseStatus {
    Holds,
    Equality,
    Violated,
    Inconclusive,
}

impl fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseStatus::Holds => "holds",
            CaseStatus::Equality => "equality",
            CaseStatus::Violated => "violated",
            CaseStatus::Inconclusive => "inconclusive",
        })
    }
}

/// Witness data attached to a result: a digest of the exact input bits,
/// plus the maximizing angle and/or unit vector when the case has one.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CaseWitness {
    pub inputs_digest: u64,
    pub theta: Option<f64>,
    pub vector: Option<Vec<Complex64>>,
}

/// One case evaluation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CaseResult {
    pub case_id: CaseId,
    pub lhs: f64,
    pub rhs: f64,
    /// The middle quantity of a two-sided case.
    pub mid: Option<f64>,
    /// `rhs - lhs` for one-sided cases; the binding side's margin for
    /// two-sided ones.
    pub slack: f64,
    pub status: CaseStatus,
    pub witness: CaseWitness,
    pub params: CaseParams,
}

/// Errors from case evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum CaseError {
    UnknownCase(String),
    ConstraintViolated {
        case: CaseId,
        constraint: &'static str,
    },
    WrongInputs {
        case: CaseId,
        expected: InputShape,
    },
    BadInput {
        case: CaseId,
        reason: &'static str,
    },
    Linalg(LinalgError),
}

impl fmt::Display for CaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseError::UnknownCase(s) => write!(f, "unknown case id `{s}`"),
            CaseError::ConstraintViolated { case, constraint } => {
                write!(f, "{case}: constraint violated: {constraint}")
            }
            CaseError::WrongInputs { case, expected } => {
                write!(f, "{case}: wrong inputs, expected {expected}")
            }
            CaseError::BadInput { case, reason } => write!(f, "{case}: bad input: {reason}"),
            CaseError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl From<LinalgError> for CaseError {
    fn from(e: LinalgError) -> Self {
        CaseError::Linalg(e)
    }
}

pub use eval::{evaluate_case, evaluate_case_sweep};
