//! Hermitian forms over `F = Q(zeta_m)` and `F(t)`, formal Witt classes,
//! and the structural maps between isometry triples and forms.

mod constant;
mod generators;
mod structural;

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::field_arith::CyclotomicNumber;
use crate::funcfield::RationalFunction;
use crate::linalg::{self, Matrix, Scalar};
use crate::{Error, Result};

pub use constant::{diagonalize_constant, signature_constant, signature_constant_with, signature_vector};
pub use generators::{make_canonical, make_metabolic, make_random_diagonal, metabolic_from, CanonicalBlock};
pub use structural::{
    extend_constant, mu_component, sigma_component, split_form, trace_form_rp, triple_to_fp_form, EigenComponent,
    FpPolynomial,
};

/// What [`HermitianForm::validate`] found wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `bar(g[col][row]) != epsilon * g[row][col]`; 1-based coordinates.
    NotHermitian { row: usize, col: usize },
    Singular,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { row, col } => write!(f, "not epsilon-hermitian at entry ({row}, {col})"),
            Violation::Singular => write!(f, "determinant vanishes identically"),
        }
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Error {
        match v {
            Violation::NotHermitian { row, col } => Error::NotHermitian { row, col },
            Violation::Singular => Error::Singular { summand: None },
        }
    }
}

fn check_epsilon(eps: i8) -> Result<()> {
    if eps == 1 || eps == -1 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon must be +1 or -1, found {eps}")))
    }
}

fn check_square<T>(gram: &Matrix<T>, what: &str) -> Result<()> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(format!("{what} must be square")));
    }
    Ok(())
}

/// First entry (1-based) where `conj(g[j][i]) != eps * g[i][j]`.
fn hermitian_violation<T: Scalar>(gram: &Matrix<T>, eps: i8) -> Option<(usize, usize)> {
    let n = gram.len();
    for i in 0..n {
        for j in i..n {
            if gram[j][i].conj() != gram[i][j].scaled_by_sign(eps) {
                return Some((i + 1, j + 1));
            }
        }
    }
    None
}

/// An `epsilon`-hermitian form over `F(t)`, given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    m: u64,
    epsilon: i8,
    gram: Matrix<RationalFunction>,
}

impl HermitianForm {
    /// Checks shape and conductors only; see [`validate`](Self::validate).
    pub fn new(m: u64, epsilon: i8, gram: Matrix<RationalFunction>) -> Result<Self> {
        check_epsilon(epsilon)?;
        check_square(&gram, "gram matrix")?;
        for x in gram.iter().flatten() {
            if x.conductor() != m {
                return Err(Error::ConductorMismatch {
                    left: m,
                    right: x.conductor(),
                });
            }
        }
        Ok(HermitianForm { m, epsilon, gram })
    }

    /// Like [`new`](Self::new) followed by a successful `validate`.
    pub fn checked(m: u64, epsilon: i8, gram: Matrix<RationalFunction>) -> Result<Self> {
        let f = Self::new(m, epsilon, gram)?;
        f.validate()?;
        Ok(f)
    }

    /// Diagonal form `<d_1, ..., d_n>`.
    pub fn diagonal(m: u64, epsilon: i8, entries: &[RationalFunction]) -> Result<Self> {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { RationalFunction::zero(m) })
                    .collect()
            })
            .collect();
        Self::new(m, epsilon, gram)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix<RationalFunction> {
        &self.gram
    }

    /// Checks `epsilon`-hermitian symmetry and nonsingularity.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        self.validate_symmetry()?;
        if self.determinant().is_zero() {
            return Err(Violation::Singular);
        }
        Ok(())
    }

    /// Checks only `epsilon`-hermitian symmetry.
    pub fn validate_symmetry(&self) -> std::result::Result<(), Violation> {
        match hermitian_violation(&self.gram, self.epsilon) {
            Some((row, col)) => Err(Violation::NotHermitian { row, col }),
            None => Ok(()),
        }
    }

    pub fn determinant(&self) -> RationalFunction {
        linalg::det(&self.gram, &RationalFunction::one(self.m))
    }

    /// The congruent form `P G P^*`.
    pub fn congruent(&self, p: &Matrix<RationalFunction>) -> Result<Self> {
        if p.len() != self.rank() || p.iter().any(|r| r.len() != self.rank()) {
            return Err(Error::InvalidArgument("transform has the wrong shape".into()));
        }
        let g = linalg::mat_mul(&linalg::mat_mul(p, &self.gram), &linalg::conj_transpose(p));
        Self::new(self.m, self.epsilon, g)
    }

    /// Orthogonal sum.
    pub fn orthogonal_sum(&self, o: &Self) -> Result<Self> {
        if self.m != o.m {
            return Err(Error::ConductorMismatch { left: self.m, right: o.m });
        }
        if self.epsilon != o.epsilon {
            return Err(Error::EpsilonMismatch(format!("{} vs {}", self.epsilon, o.epsilon)));
        }
        let (a, b) = (self.rank(), o.rank());
        let zero = RationalFunction::zero(self.m);
        let mut g = vec![vec![zero; a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                g[a + i][a + j] = o.gram[i][j].clone();
            }
        }
        Self::new(self.m, self.epsilon, g)
    }

    pub fn negated(&self) -> Self {
        HermitianForm {
            m: self.m,
            epsilon: self.epsilon,
            gram: self.gram.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect(),
        }
    }

    /// The same form over `Q(zeta_target)(t)`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.lift(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(target, self.epsilon, gram)
    }

    /// Constant entries, if every entry is constant.
    pub fn as_constant(&self) -> Option<ConstantForm> {
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.as_constant()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(ConstantForm {
            m: self.m,
            epsilon: self.epsilon,
            gram,
        })
    }

    /// Parses `{"m", "epsilon", "gram"}`; entries may be objects or
    /// expression strings.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let m = v
            .get("m")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing positive integer field \"m\"".into()))?;
        let eps = v.get("epsilon").and_then(|x| x.as_i64()).unwrap_or(1);
        let gram = v.get("gram").ok_or_else(|| Error::Parse("missing field \"gram\"".into()))?;
        Self::new(m, eps as i8, parse_gram(m, gram)?)
    }
}

/// Parses a JSON matrix of rational-function entries.
pub(crate) fn parse_gram(m: u64, v: &serde_json::Value) -> Result<Matrix<RationalFunction>> {
    if m == 0 {
        return Err(Error::Parse("conductor must be positive".into()));
    }
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("gram must be an array of rows".into()))?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let r = r
                .as_array()
                .ok_or_else(|| Error::Parse(format!("gram row {} is not an array", i + 1)))?;
            r.iter()
                .enumerate()
                .map(|(j, x)| {
                    RationalFunction::from_json(m, x)
                        .map_err(|e| Error::Parse(format!("entry ({}, {}): {e}", i + 1, j + 1)))
                })
                .collect()
        })
        .collect()
}

impl Serialize for HermitianForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            m: u64,
            epsilon: i8,
            gram: &'a Matrix<RationalFunction>,
        }
        Raw {
            m: self.m,
            epsilon: self.epsilon,
            gram: &self.gram,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        HermitianForm::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// An `epsilon`-hermitian form over a cyclotomic field (constant entries).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantForm {
    m: u64,
    epsilon: i8,
    gram: Matrix<CyclotomicNumber>,
}

impl ConstantForm {
    pub fn new(m: u64, epsilon: i8, gram: Matrix<CyclotomicNumber>) -> Result<Self> {
        check_epsilon(epsilon)?;
        check_square(&gram, "gram matrix")?;
        for x in gram.iter().flatten() {
            if x.conductor() != m {
                return Err(Error::ConductorMismatch {
                    left: m,
                    right: x.conductor(),
                });
            }
        }
        Ok(ConstantForm { m, epsilon, gram })
    }

    pub fn diagonal(m: u64, epsilon: i8, entries: &[CyclotomicNumber]) -> Result<Self> {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { CyclotomicNumber::zero(m) })
                    .collect()
            })
            .collect();
        Self::new(m, epsilon, gram)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix<CyclotomicNumber> {
        &self.gram
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if let Some((row, col)) = hermitian_violation(&self.gram, self.epsilon) {
            return Err(Violation::NotHermitian { row, col });
        }
        if linalg::det(&self.gram, &CyclotomicNumber::one(self.m)).is_zero() {
            return Err(Violation::Singular);
        }
        Ok(())
    }

    pub fn orthogonal_sum(&self, o: &Self) -> Result<Self> {
        let a = extend_constant(self);
        let b = extend_constant(o);
        Ok(a.orthogonal_sum(&b)?.as_constant().expect("constant entries"))
    }

    pub fn negated(&self) -> Self {
        ConstantForm {
            m: self.m,
            epsilon: self.epsilon,
            gram: self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }

    pub fn lift(&self, target: u64) -> Result<Self> {
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.lift_to_compositum(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(target, self.epsilon, gram)
    }
}

/// One term `coeff * [form]` of a Witt class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub form: HermitianForm,
    #[serde(with = "crate::rational::as_string")]
    pub coeff: BigRational,
}

/// A formal rational combination `sum r_i [form_i]` in the Witt group of
/// `F(t)` tensored with `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittElement {
    m: u64,
    epsilon: i8,
    summands: Vec<Summand>,
}

impl WittElement {
    pub fn zero(m: u64, epsilon: i8) -> Self {
        WittElement {
            m,
            epsilon,
            summands: Vec::new(),
        }
    }

    pub fn from_form(form: HermitianForm) -> Self {
        Self::from_summands(form.m, form.epsilon, vec![(form, BigRational::from_integer(1.into()))])
            .expect("single summand is consistent")
    }

    pub fn from_summands(m: u64, epsilon: i8, summands: Vec<(HermitianForm, BigRational)>) -> Result<Self> {
        check_epsilon(epsilon)?;
        let mut w = Self::zero(m, epsilon);
        for (form, coeff) in summands {
            w.push(form, coeff)?;
        }
        Ok(w)
    }

    /// Appends `coeff * [form]`.
    pub fn push(&mut self, form: HermitianForm, coeff: BigRational) -> Result<()> {
        if form.m != self.m {
            return Err(Error::ConductorMismatch {
                left: self.m,
                right: form.m,
            });
        }
        if form.epsilon != self.epsilon {
            return Err(Error::EpsilonMismatch(format!(
                "summand has epsilon {} but the class has {}",
                form.epsilon, self.epsilon
            )));
        }
        self.summands.push(Summand { form, coeff });
        Ok(())
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// Class sum; concatenates summand lists.
    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        if self.m != o.m {
            return Err(Error::ConductorMismatch { left: self.m, right: o.m });
        }
        if self.epsilon != o.epsilon {
            return Err(Error::EpsilonMismatch(format!("{} vs {}", self.epsilon, o.epsilon)));
        }
        let mut w = self.clone();
        w.summands.extend(o.summands.iter().cloned());
        Ok(w)
    }

    /// Multiplies every multiplicity by `r`; `r = 0` gives the zero class.
    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero(self.m, self.epsilon);
        }
        WittElement {
            m: self.m,
            epsilon: self.epsilon,
            summands: self
                .summands
                .iter()
                .map(|s| Summand {
                    form: s.form.clone(),
                    coeff: &s.coeff * r,
                })
                .collect(),
        }
    }

    /// The same class over `Q(zeta_target)(t)`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        let mut w = Self::zero(target, self.epsilon);
        for s in &self.summands {
            w.push(s.form.lift(target)?, s.coeff.clone())?;
        }
        Ok(w)
    }

    /// Validates every summand, reporting the first failure.
    pub fn validate(&self) -> Result<()> {
        for (k, s) in self.summands.iter().enumerate() {
            match s.form.validate() {
                Ok(()) => {}
                Err(Violation::Singular) => return Err(Error::Singular { summand: Some(k) }),
                Err(v) => return Err(v.into()),
            }
        }
        Ok(())
    }
}

impl Serialize for WittElement {
    /// `{"m", "epsilon", "summands": [{"form", "coeff"}]}`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            m: u64,
            epsilon: i8,
            summands: &'a [Summand],
        }
        Raw {
            m: self.m,
            epsilon: self.epsilon,
            summands: &self.summands,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WittElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            m: u64,
            epsilon: i8,
            summands: Vec<Summand>,
        }
        let raw = Raw::deserialize(d)?;
        WittElement::from_summands(raw.m, raw.epsilon, raw.summands.into_iter().map(|s| (s.form, s.coeff)).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// A fibered isometry triple `(V, theta, f)` over `Q(zeta_m)`: `f` preserves
/// `theta`, and both `f` and `f - 1` are invertible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTriple")]
pub struct IsometryTriple {
    m: u64,
    epsilon: i8,
    theta: Matrix<CyclotomicNumber>,
    f: Matrix<CyclotomicNumber>,
}

#[derive(Deserialize)]
struct RawTriple {
    m: u64,
    epsilon: i8,
    theta: Matrix<CyclotomicNumber>,
    f: Matrix<CyclotomicNumber>,
}

impl TryFrom<RawTriple> for IsometryTriple {
    type Error = Error;
    fn try_from(r: RawTriple) -> Result<Self> {
        IsometryTriple::new(r.m, r.epsilon, r.theta, r.f)
    }
}

impl IsometryTriple {
    pub fn new(m: u64, epsilon: i8, theta: Matrix<CyclotomicNumber>, f: Matrix<CyclotomicNumber>) -> Result<Self> {
        check_epsilon(epsilon)?;
        let bad = |s: &str| Err(Error::InvalidTriple(s.into()));
        check_square(&theta, "theta")?;
        check_square(&f, "f")?;
        let n = theta.len();
        if f.len() != n {
            return bad("theta and f have different sizes");
        }
        if theta.iter().chain(f.iter()).flatten().any(|x| x.conductor() != m) {
            return bad("entries must lie in Q(zeta_m)");
        }
        if hermitian_violation(&theta, epsilon).is_some() {
            return bad("theta is not epsilon-hermitian");
        }
        let one = CyclotomicNumber::one(m);
        if linalg::det(&theta, &one).is_zero() {
            return bad("theta is singular");
        }
        let pulled = linalg::mat_mul(&linalg::mat_mul(&linalg::conj_transpose(&f), &theta), &f);
        if pulled != theta {
            return bad("f is not an isometry of theta");
        }
        if linalg::det(&f, &one).is_zero() {
            return bad("f is not invertible");
        }
        let f_minus_1 = linalg::mat_sub(&f, &linalg::identity_like(n, &one));
        if linalg::det(&f_minus_1, &one).is_zero() {
            return bad("f - 1 is not invertible");
        }
        Ok(IsometryTriple { m, epsilon, theta, f })
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &Matrix<CyclotomicNumber> {
        &self.theta
    }

    pub fn f(&self) -> &Matrix<CyclotomicNumber> {
        &self.f
    }
}
