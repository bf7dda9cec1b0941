//! Maps between isometry triples over `F` and forms over `F(t)` or `F_p`.

use serde::Serialize;

use super::{constant::signature_constant, ConstantForm, HermitianForm, IsometryTriple};
use crate::field_arith::{cyclotomic_polynomial, ntheory, CyclotomicNumber, Embedding};
use crate::funcfield::{LaurentPoly, RationalFunction};
use crate::linalg::{self, Matrix};
use crate::{Error, Result};

/// `(1 - t^-1) M + eps (1 - t) M^*` with `M = theta (1 - f)^-1`.
///
/// A triple with `theta` of symmetry `-eps` maps to an `eps`-hermitian form
/// over `F(t)` of the same rank.
pub fn split_form(triple: &IsometryTriple, target_epsilon: i8) -> Result<HermitianForm> {
    if triple.epsilon() != -target_epsilon {
        return Err(Error::EpsilonMismatch(format!(
            "a triple with epsilon {} maps to forms with epsilon {}, not {}",
            triple.epsilon(),
            -triple.epsilon(),
            target_epsilon
        )));
    }
    let m = triple.conductor();
    let n = triple.dim();
    let one = CyclotomicNumber::one(m);
    let one_minus_f = linalg::mat_sub(&linalg::identity_like(n, &one), triple.f());
    let inv = linalg::inverse(&one_minus_f)
        .map_err(|_| Error::InvalidTriple("1 - f is singular".into()))?;
    let mm = linalg::mat_mul(triple.theta(), &inv);
    let a = LaurentPoly::from_integer_terms(m, &[(0, 1), (-1, -1)]);
    let b = LaurentPoly::from_integer_terms(m, &[(0, target_epsilon as i64), (1, -(target_epsilon as i64))]);
    let gram = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| RationalFunction::from_laurent(&a.scale(&mm[i][j]).add(&b.scale(&mm[j][i].conjugate()))))
                .collect()
        })
        .collect();
    let form = HermitianForm::new(m, target_epsilon, gram)?;
    if form.determinant().is_zero() {
        return Err(Error::Singular { summand: None });
    }
    Ok(form)
}

/// The same Gram matrix read over `F(t)`.
pub fn extend_constant(form: &ConstantForm) -> HermitianForm {
    let gram = form
        .gram()
        .iter()
        .map(|r| r.iter().map(|x| RationalFunction::constant(x.clone())).collect())
        .collect();
    HermitianForm::new(form.conductor(), form.epsilon(), gram).expect("shape already checked")
}

/// Irreducible `p(t)` with `F_p = F[t]/p` again cyclotomic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FpPolynomial {
    /// `Phi_d` over `F = Q`, so `F_p = Q(zeta_d)` with `t -> zeta_d`.
    Cyclotomic { d: u64 },
    /// `t - zeta_n^j` over `F = Q(zeta_m)`, with `n | m`.
    Linear { m: u64, n: u64, j: u64 },
}

impl FpPolynomial {
    pub fn cyclotomic(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedPolynomial(format!(
                "Phi_{d} has the root 1, which fibered triples exclude"
            )));
        }
        Ok(FpPolynomial::Cyclotomic { d })
    }

    pub fn linear(m: u64, n: u64, j: u64) -> Result<Self> {
        if n == 0 || !m.is_multiple_of(n) {
            return Err(Error::UnsupportedPolynomial(format!("zeta_{n} does not lie in Q(zeta_{m})")));
        }
        if j.is_multiple_of(n) {
            return Err(Error::UnsupportedPolynomial("t - 1 is excluded".into()));
        }
        Ok(FpPolynomial::Linear { m, n, j: j % n })
    }

    /// Conductor of the coefficient field `F`.
    pub fn base_conductor(&self) -> u64 {
        match *self {
            FpPolynomial::Cyclotomic { .. } => 1,
            FpPolynomial::Linear { m, .. } => m,
        }
    }

    /// Conductor of `F_p`.
    pub fn fp_conductor(&self) -> u64 {
        match *self {
            FpPolynomial::Cyclotomic { d } => d,
            FpPolynomial::Linear { m, .. } => m,
        }
    }

    pub fn degree(&self) -> usize {
        match *self {
            FpPolynomial::Cyclotomic { d } => ntheory::euler_phi(d) as usize,
            FpPolynomial::Linear { .. } => 1,
        }
    }

    /// Coefficients of `p` over `F`, lowest degree first.
    fn coefficients(&self) -> Vec<CyclotomicNumber> {
        match *self {
            FpPolynomial::Cyclotomic { d } => cyclotomic_polynomial(d)
                .iter()
                .map(|c| CyclotomicNumber::from_rational(1, &num_rational::BigRational::from_integer(c.clone())))
                .collect(),
            FpPolynomial::Linear { m, .. } => vec![-&self.root_in_base(), CyclotomicNumber::one(m)],
        }
    }

    fn root_in_base(&self) -> CyclotomicNumber {
        match *self {
            FpPolynomial::Cyclotomic { .. } => unreachable!("no root in Q"),
            FpPolynomial::Linear { m, n, j } => CyclotomicNumber::zeta_power(m, ((m / n) * j) as i64),
        }
    }
}

/// `tr_{Q(zeta_d)/Q}(zeta_d^l)`, a Ramanujan sum.
fn trace_of_power(d: u64, l: u64) -> i64 {
    let g = num_integer::gcd(d, l % d);
    let g = if g == 0 { d } else { g };
    ntheory::divisors(g)
        .into_iter()
        .map(|e| ntheory::mobius(d / e) as i64 * e as i64)
        .sum()
}

fn trace_to_q(x: &CyclotomicNumber) -> CyclotomicNumber {
    let d = x.conductor();
    let mut acc = num_rational::BigRational::from_integer(0.into());
    for (l, c) in x.coeffs().iter().enumerate() {
        if !num_traits::Zero::is_zero(c) {
            acc += c * num_rational::BigRational::from_integer(trace_of_power(d, l as u64).into());
        }
    }
    CyclotomicNumber::from_rational(1, &acc)
}

fn check_fp_form(form: &ConstantForm, p: &FpPolynomial) -> Result<()> {
    if form.conductor() != p.fp_conductor() {
        return Err(Error::ConductorMismatch {
            left: p.fp_conductor(),
            right: form.conductor(),
        });
    }
    Ok(())
}

/// Trace-form triple of a form over `F_p`: `V` as an `F`-space of
/// dimension `n deg(p)` in the basis `e_a t^i`, Gram matrix
/// `tr(theta(x, y))`, and `f` the action of `t`.
pub fn trace_form_rp(form: &ConstantForm, p: &FpPolynomial) -> Result<IsometryTriple> {
    check_fp_form(form, p)?;
    let n = form.rank();
    match *p {
        FpPolynomial::Linear { m, .. } => {
            let z = p.root_in_base();
            let f = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { z.clone() } else { CyclotomicNumber::zero(m) })
                        .collect()
                })
                .collect();
            IsometryTriple::new(m, form.epsilon(), form.gram().clone(), f)
        }
        FpPolynomial::Cyclotomic { d } => {
            let deg = p.degree();
            let size = n * deg;
            let q0 = CyclotomicNumber::zero(1);
            let mut theta = vec![vec![q0.clone(); size]; size];
            for a in 0..n {
                for b in 0..n {
                    let g = &form.gram()[a][b];
                    for i in 0..deg {
                        for k in 0..deg {
                            let x = g.mul_zeta_power(k as i64 - i as i64);
                            theta[a * deg + i][b * deg + k] = trace_to_q(&x);
                        }
                    }
                }
            }
            let phi = cyclotomic_polynomial(d);
            let mut f = vec![vec![q0.clone(); size]; size];
            for a in 0..n {
                for i in 0..deg - 1 {
                    f[a * deg + i + 1][a * deg + i] = CyclotomicNumber::one(1);
                }
                for k in 0..deg {
                    let c = num_rational::BigRational::from_integer(-phi[k].clone());
                    f[a * deg + k][a * deg + deg - 1] = CyclotomicNumber::from_rational(1, &c);
                }
            }
            IsometryTriple::new(1, form.epsilon(), theta, f)
        }
    }
}

fn apply_matrix(a: &Matrix<CyclotomicNumber>, v: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(CyclotomicNumber::zero(v[0].conductor()), |acc, (x, y)| &acc + &(x * y))
        })
        .collect()
}

/// `x^* theta y`.
fn pairing(theta: &Matrix<CyclotomicNumber>, x: &[CyclotomicNumber], y: &[CyclotomicNumber]) -> CyclotomicNumber {
    let ty = apply_matrix(theta, y);
    x.iter()
        .zip(&ty)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(CyclotomicNumber::zero(y[0].conductor()), |acc, (a, b)| &acc + &(&a.conjugate() * b))
}

/// Trace-dual basis of `1, zeta, ..., zeta^(deg-1)` in `Q(zeta_d)`.
fn trace_dual_basis(d: u64) -> Result<Vec<CyclotomicNumber>> {
    let deg = ntheory::euler_phi(d) as usize;
    let t: Matrix<CyclotomicNumber> = (0..deg)
        .map(|i| {
            (0..deg)
                .map(|k| CyclotomicNumber::from_integer(1, trace_of_power(d, (i + k) as u64)))
                .collect()
        })
        .collect();
    let tinv = linalg::inverse(&t)?;
    Ok((0..deg)
        .map(|k| {
            let coeffs: Vec<_> = (0..deg).map(|l| tinv[k][l].as_rational().expect("rational")).collect();
            CyclotomicNumber::from_coeffs(d, &coeffs)
        })
        .collect())
}

/// The `F_p`-form on `Ker p(f)` whose trace recovers `theta`:
/// `theta~(a, b) = sum_k theta(a, f^k b) zeta_k'`, where `zeta_k'` is the
/// trace-dual basis of the powers of `t`.
pub fn triple_to_fp_form(triple: &IsometryTriple, p: &FpPolynomial) -> Result<ConstantForm> {
    if triple.conductor() != p.base_conductor() {
        return Err(Error::ConductorMismatch {
            left: p.base_conductor(),
            right: triple.conductor(),
        });
    }
    let base = triple.conductor();
    let size = triple.dim();
    let deg = p.degree();
    let one = CyclotomicNumber::one(base);
    let f = triple.f();
    // p(f) by Horner
    let coeffs = p.coefficients();
    let mut pf = linalg::mat_scale(&linalg::identity_like(size, &one), coeffs.last().unwrap());
    for c in coeffs.iter().rev().skip(1) {
        pf = linalg::mat_add(&linalg::mat_mul(&pf, f), &linalg::mat_scale(&linalg::identity_like(size, &one), c));
    }
    let ker = linalg::kernel(&pf);
    if !ker.len().is_multiple_of(deg) {
        return Err(Error::Consistency(format!(
            "Ker p(f) has dimension {} not divisible by deg p = {deg}",
            ker.len()
        )));
    }
    // greedy F_p-basis of the kernel
    let mut spanned: Matrix<CyclotomicNumber> = Vec::new();
    let mut basis = Vec::new();
    for v in ker {
        let mut trial = spanned.clone();
        trial.push(v.clone());
        if linalg::rank(&trial) == spanned.len() {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..deg {
            spanned.push(w.clone());
            w = apply_matrix(f, &w);
        }
        if linalg::rank(&spanned) != spanned.len() {
            return Err(Error::Consistency("t-orbit is not F-independent".into()));
        }
        basis.push(v);
    }
    let fp = p.fp_conductor();
    let dual = match *p {
        FpPolynomial::Cyclotomic { d } => trace_dual_basis(d)?,
        FpPolynomial::Linear { m, .. } => vec![CyclotomicNumber::one(m)],
    };
    let r = basis.len();
    let mut gram = vec![vec![CyclotomicNumber::zero(fp); r]; r];
    for (a, ba) in basis.iter().enumerate() {
        for (b, bb) in basis.iter().enumerate() {
            let mut acc = CyclotomicNumber::zero(fp);
            let mut w = bb.clone();
            for dk in &dual {
                let v = pairing(triple.theta(), ba, &w).lift_to_compositum(fp)?;
                acc = &acc + &(&v * dk);
                w = apply_matrix(f, &w);
            }
            gram[a][b] = acc;
        }
    }
    ConstantForm::new(fp, triple.epsilon(), gram)
}

/// Reduced `j / n` as `(n', j')`.
fn reduce_point(n: u64, j: u64) -> (u64, u64) {
    let j = j % n;
    let g = num_integer::gcd(n, j);
    if j == 0 {
        (1, 0)
    } else {
        (n / g, j / g)
    }
}

/// `p` for the `Phi_d` family is over `Q`; the only embedding is the identity.
fn check_embedding(p: &FpPolynomial, rho: &Embedding) -> Result<()> {
    if rho.conductor() != p.base_conductor() {
        return Err(Error::ConductorMismatch {
            left: p.base_conductor(),
            right: rho.conductor(),
        });
    }
    Ok(())
}

/// Exponent `e` with `z = zeta_L^e`, where `L` is the conductor of `F_p`;
/// errors when `z` is not a root of `rho(p)`.
fn root_exponent(p: &FpPolynomial, rho: &Embedding, n: u64, j: u64) -> Result<u64> {
    let (rn, rj) = reduce_point(n.max(1), j);
    let not_root = || Error::NotARoot(format!("exp(2 pi i {j}/{n}) is not a root of rho(p) for {p:?} and {rho}"));
    match *p {
        FpPolynomial::Cyclotomic { d } => {
            if rn != d {
                return Err(not_root());
            }
            Ok(rj)
        }
        FpPolynomial::Linear { m, n: n0, j: j0 } => {
            let e = ((m / n0) as u128 * j0 as u128 * rho.exponent() as u128 % m as u128) as u64;
            let (en, ej) = reduce_point(m, e);
            if (en, ej) != (rn, rj) {
                return Err(not_root());
            }
            Ok(e)
        }
    }
}

/// The constant form `rho_z(theta)`: coefficients mapped by `rho`, `t -> z`.
pub fn mu_component(form: &ConstantForm, p: &FpPolynomial, rho: &Embedding, n: u64, j: u64) -> Result<ConstantForm> {
    check_fp_form(form, p)?;
    check_embedding(p, rho)?;
    let e = root_exponent(p, rho, n, j)?;
    let k = match *p {
        FpPolynomial::Cyclotomic { .. } => e,
        FpPolynomial::Linear { .. } => rho.exponent(),
    };
    let gram = form
        .gram()
        .iter()
        .map(|r| r.iter().map(|x| x.apply_galois(k)).collect())
        .collect();
    ConstantForm::new(form.conductor(), form.epsilon(), gram)
}

/// The eigenspace `Ker(f - z)` of the trace-form triple with the restricted
/// trace form.
#[derive(Clone, Debug, Serialize)]
pub struct EigenComponent {
    /// `z = zeta_n^j`.
    pub n: u64,
    pub j: u64,
    /// Columns spanning `Ker(f - z)`.
    pub basis: Vec<Vec<CyclotomicNumber>>,
    pub gram: ConstantForm,
}

impl EigenComponent {
    pub fn signature(&self) -> Result<i64> {
        signature_constant(&self.gram, &Embedding::identity(self.gram.conductor()))
    }
}

pub fn sigma_component(form: &ConstantForm, p: &FpPolynomial, rho: &Embedding, n: u64, j: u64) -> Result<EigenComponent> {
    check_fp_form(form, p)?;
    check_embedding(p, rho)?;
    let e = root_exponent(p, rho, n, j)?;
    let triple = trace_form_rp(form, p)?;
    let l = p.fp_conductor();
    let map = |x: &CyclotomicNumber| -> Result<CyclotomicNumber> {
        match *p {
            FpPolynomial::Cyclotomic { .. } => x.lift_to_compositum(l),
            FpPolynomial::Linear { .. } => Ok(x.apply_galois(rho.exponent())),
        }
    };
    let map_matrix = |a: &Matrix<CyclotomicNumber>| -> Result<Matrix<CyclotomicNumber>> {
        a.iter().map(|r| r.iter().map(map).collect()).collect()
    };
    let theta = map_matrix(triple.theta())?;
    let f = map_matrix(triple.f())?;
    let z = CyclotomicNumber::zeta_power(l, e as i64);
    let size = triple.dim();
    let shifted = linalg::mat_sub(&f, &linalg::mat_scale(&linalg::identity_like(size, &CyclotomicNumber::one(l)), &z));
    let basis = linalg::kernel(&shifted);
    if basis.len() != form.rank() {
        return Err(Error::Consistency(format!(
            "Ker(f - z) has dimension {} but the form has rank {}",
            basis.len(),
            form.rank()
        )));
    }
    let gram = basis
        .iter()
        .map(|x| basis.iter().map(|y| pairing(&theta, x, y)).collect())
        .collect();
    Ok(EigenComponent {
        n,
        j,
        basis,
        gram: ConstantForm::new(l, form.epsilon(), gram)?,
    })
}
