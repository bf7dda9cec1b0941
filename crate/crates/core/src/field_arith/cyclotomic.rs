//! Elements of the cyclotomic field `Q(zeta_m)` in the power basis
//! `1, zeta, ..., zeta^(phi(m)-1)` reduced modulo `Phi_m`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modular;
use super::ntheory;
use crate::error::{Error, Result};

/// The monic cyclotomic polynomial `Phi_m`, cached per conductor.
#[derive(Debug)]
pub(crate) struct CycloPoly {
    pub m: u64,
    pub phi: usize,
    /// All `phi + 1` coefficients, constant term first.
    pub coeffs: Vec<BigInt>,
    /// Nonzero coefficients below the leading one.
    support: Vec<(usize, BigInt)>,
    support_small: Option<Vec<(usize, i128)>>,
}

fn poly_mul_xd_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn poly_div_xd_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    let n = p.len() - d;
    let mut q = vec![BigInt::zero(); n];
    for i in 0..n {
        let prev = if i >= d { q[i - d].clone() } else { BigInt::zero() };
        q[i] = prev - &p[i];
    }
    debug_assert_eq!(poly_mul_xd_minus_one(&q, d), p);
    q
}

fn compute_cyclotomic(m: u64) -> Vec<BigInt> {
    let r = ntheory::radical(m);
    let mut num = vec![BigInt::one()];
    let mut dens = Vec::new();
    for d in ntheory::divisors(r) {
        match ntheory::mobius(r / d) {
            1 => num = poly_mul_xd_minus_one(&num, d as usize),
            -1 => dens.push(d as usize),
            _ => {}
        }
    }
    for d in dens {
        num = poly_div_xd_minus_one(&num, d);
    }
    let stretch = (m / r) as usize;
    if stretch == 1 {
        return num;
    }
    let mut out = vec![BigInt::zero(); (num.len() - 1) * stretch + 1];
    for (i, c) in num.into_iter().enumerate() {
        out[i * stretch] = c;
    }
    out
}

pub(crate) fn cyclotomic_poly(m: u64) -> Arc<CycloPoly> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    let coeffs = compute_cyclotomic(m);
    let phi = coeffs.len() - 1;
    let support: Vec<(usize, BigInt)> = coeffs[..phi]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect();
    let support_small = support
        .iter()
        .map(|(i, c)| c.to_i128().map(|v| (*i, v)))
        .collect();
    let poly = Arc::new(CycloPoly {
        m,
        phi,
        coeffs,
        support,
        support_small,
    });
    cache.lock().unwrap().insert(m, poly.clone());
    poly
}

/// Integer coefficients of `Phi_m`, constant term first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    cyclotomic_poly(m).coeffs.clone()
}

impl CycloPoly {
    /// Reduce an integer polynomial (any length) modulo `Phi_m`.
    pub(crate) fn reduce(&self, mut buf: Vec<BigInt>) -> Vec<BigInt> {
        let m = self.m as usize;
        if buf.len() > m {
            for e in m..buf.len() {
                let c = std::mem::take(&mut buf[e]);
                if !c.is_zero() {
                    buf[e % m] += c;
                }
            }
            buf.truncate(m);
        }
        if let Some(small) = self.reduce_small(&buf) {
            return small;
        }
        let phi = self.phi;
        for e in (phi..buf.len()).rev() {
            let c = std::mem::take(&mut buf[e]);
            if c.is_zero() {
                continue;
            }
            for (i, pi) in &self.support {
                buf[e - phi + i] -= &c * pi;
            }
        }
        buf.resize(phi, BigInt::zero());
        buf
    }

    fn reduce_small(&self, buf: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut small: Vec<i128> = Vec::with_capacity(buf.len());
        for c in buf {
            let v = c.to_i128()?;
            if v.unsigned_abs() > 1u128 << 100 {
                return None;
            }
            small.push(v);
        }
        self.reduce_i128(small).map(|v| v.into_iter().map(BigInt::from).collect())
    }

    fn reduce_i128(&self, mut buf: Vec<i128>) -> Option<Vec<i128>> {
        let support = self.support_small.as_ref()?;
        let phi = self.phi;
        for e in (phi..buf.len()).rev() {
            let c = std::mem::take(&mut buf[e]);
            if c == 0 {
                continue;
            }
            for &(i, pi) in support {
                let t = &mut buf[e - phi + i];
                *t = t.checked_sub(c.checked_mul(pi)?)?;
            }
        }
        buf.resize(phi, 0);
        Some(buf)
    }

    /// Product of two reduced coefficient vectors, reduced again.
    pub(crate) fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if let Some(v) = self.mul_small(a, b) {
            return v;
        }
        let mut buf = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    buf[i + j] += x * y;
                }
            }
        }
        self.reduce(buf)
    }

    fn mul_small(&self, a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
        const LIMIT: u128 = 1 << 50;
        let conv = |v: &[BigInt]| -> Option<Vec<(usize, i128)>> {
            let mut out = Vec::new();
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    let x = c.to_i128()?;
                    if x.unsigned_abs() > LIMIT {
                        return None;
                    }
                    out.push((i, x));
                }
            }
            Some(out)
        };
        let sa = conv(a)?;
        let sb = conv(b)?;
        let mut buf = vec![0i128; a.len() + b.len() - 1];
        for &(i, x) in &sa {
            for &(j, y) in &sb {
                let t = &mut buf[i + j];
                *t = t.checked_add(x * y)?;
            }
        }
        self.reduce_i128(buf)
            .map(|v| v.into_iter().map(BigInt::from).collect())
    }
}

/// An element of `Q(zeta_m)`.
///
/// Stored as an integer coefficient vector of length `phi(m)` over a common
/// positive denominator, with `gcd(content, den) = 1`. The representation is
/// canonical, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    m: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CyclotomicNumber {
    fn from_parts(m: u64, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = CyclotomicNumber { m, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub(crate) fn poly(&self) -> Arc<CycloPoly> {
        cyclotomic_poly(self.m)
    }

    pub fn zero(m: u64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let phi = ntheory::euler_phi(m) as usize;
        CyclotomicNumber {
            m,
            num: vec![BigInt::zero(); phi],
            den: BigInt::one(),
        }
    }

    pub fn one(m: u64) -> Self {
        Self::from_integer(m, 1)
    }

    pub fn from_integer(m: u64, v: i64) -> Self {
        let mut x = Self::zero(m);
        x.num[0] = BigInt::from(v);
        x
    }

    pub fn from_rational(m: u64, q: &BigRational) -> Self {
        let mut x = Self::zero(m);
        x.num[0] = q.numer().clone();
        x.den = q.denom().clone();
        x.normalize();
        x
    }

    /// `zeta_m^e` for any integer exponent.
    pub fn zeta_power(m: u64, e: i64) -> Self {
        let e = e.rem_euclid(m as i64) as usize;
        let mut buf = vec![BigInt::zero(); m as usize];
        buf[e] = BigInt::one();
        let cp = cyclotomic_poly(m);
        Self::from_parts(m, cp.reduce(buf), BigInt::one())
    }

    /// `sqrt(-1)`; requires `4 | m`.
    pub fn imaginary_unit(m: u64) -> Result<Self> {
        if !m.is_multiple_of(4) {
            return Err(Error::NotDivisible { from: 4, to: m });
        }
        Ok(Self::zeta_power(m, (m / 4) as i64))
    }

    /// Build from rational coordinates in the power basis. Vectors of any
    /// length are accepted and reduced modulo `Phi_m`.
    pub fn from_coeffs(m: u64, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let buf: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_integer_poly(m, buf, den)
    }

    pub(crate) fn from_integer_poly(m: u64, buf: Vec<BigInt>, den: BigInt) -> Self {
        let cp = cyclotomic_poly(m);
        let mut buf = buf;
        if buf.len() < cp.phi {
            buf.resize(cp.phi, BigInt::zero());
        }
        Self::from_parts(m, cp.reduce(buf), den)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    /// `phi(m)`, the length of the coordinate vector.
    pub fn degree(&self) -> usize {
        self.num.len()
    }

    /// Rational coordinates in the reduced power basis.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub(crate) fn int_coeffs(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            Err(Error::ConductorMismatch {
                left: self.m,
                right: other.m,
            })
        } else {
            Ok(())
        }
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Self {
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            return Self::from_parts(self.m, num, self.den.clone());
        }
        let num = {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let l = a * &other.den;
                    let r = b * &self.den;
                    if negate {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect()
        };
        Self::from_parts(self.m, num, &self.den * &other.den)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_signed(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_signed(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.m));
        }
        let num = self.poly().mul(&self.num, &other.num);
        Ok(Self::from_parts(self.m, num, &self.den * &other.den))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::from_parts(self.m, num, &self.den * q.denom())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let num = self.num.iter().map(|c| c * k).collect();
        Self::from_parts(self.m, num, self.den.clone())
    }

    /// Multiplicative inverse. Small fields solve the multiplication-matrix
    /// system directly; larger ones go through the multimodular route.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.m, &q.recip()));
        }
        if self.degree() <= 16 {
            self.inv_linear()
        } else {
            self.inv_multimodular()
        }
    }

    pub(crate) fn inv_linear(&self) -> Result<Self> {
        let phi = self.degree();
        // column j holds the coordinates of self * zeta^j
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(phi);
        let mut cur = self.clone();
        let zeta = Self::zeta_power(self.m, 1);
        for _ in 0..phi {
            cols.push(cur.coeffs());
            cur = &cur * &zeta;
        }
        let mut a: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for c in 0..phi {
            let p = (c..phi)
                .find(|&r| !a[r][c].is_zero())
                .ok_or_else(|| Error::Consistency("singular multiplication matrix".into()))?;
            a.swap(c, p);
            let pivot = a[c][c].clone();
            for v in a[c].iter_mut() {
                *v /= &pivot;
            }
            for r in 0..phi {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in c..=phi {
                        let t = &a[c][k] * &f;
                        a[r][k] -= t;
                    }
                }
            }
        }
        let x: Vec<BigRational> = a.into_iter().map(|row| row[phi].clone()).collect();
        Ok(Self::from_coeffs(self.m, &x))
    }

    pub(crate) fn inv_multimodular(&self) -> Result<Self> {
        let cp = self.poly();
        let found = modular::inverse_candidates(&self.num, &self.den, self.m, &cp.coeffs, |n, d| {
            let cand = Self::from_parts(self.m, n.to_vec(), d.clone());
            (&cand * self).is_one()
        });
        match found {
            Some((n, d)) => Ok(Self::from_parts(self.m, n, d)),
            None => Err(Error::Consistency("multimodular inversion ran out of primes".into())),
        }
    }

    /// Image under `zeta -> zeta^k` (an automorphism when `gcd(k, m) = 1`).
    pub fn apply_galois(&self, k: u64) -> Self {
        let m = self.m as usize;
        if m <= 2 {
            return self.clone();
        }
        let k = (k % self.m) as usize;
        let mut buf = vec![BigInt::zero(); m];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                buf[(i * k) % m] += c;
            }
        }
        Self::from_parts(self.m, self.poly().reduce(buf), self.den.clone())
    }

    /// Complex conjugation, `zeta -> zeta^-1`.
    pub fn conjugate(&self) -> Self {
        if self.m <= 2 {
            return self.clone();
        }
        self.apply_galois(self.m - 1)
    }

    /// Multiply by `zeta_m^e`.
    pub fn mul_zeta_power(&self, e: i64) -> Self {
        let m = self.m as usize;
        let e = e.rem_euclid(self.m as i64) as usize;
        let mut buf = vec![BigInt::zero(); m];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                buf[(i + e) % m] += c;
            }
        }
        Self::from_parts(self.m, self.poly().reduce(buf), self.den.clone())
    }

    /// The same element viewed in `Q(zeta_target)`; requires `m | target`.
    pub fn lift_to_compositum(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.m) {
            return Err(Error::NotDivisible {
                from: self.m,
                to: target,
            });
        }
        if target == self.m {
            return Ok(self.clone());
        }
        let stride = (target / self.m) as usize;
        let mut buf = vec![BigInt::zero(); target as usize];
        for (i, c) in self.num.iter().enumerate() {
            buf[i * stride] = c.clone();
        }
        Ok(Self::from_parts(
            target,
            cyclotomic_poly(target).reduce(buf),
            self.den.clone(),
        ))
    }

    /// A nonzero element `s` with `conj(s) = -s`, if the involution is
    /// nontrivial.
    pub fn skew_unit(m: u64) -> Option<Self> {
        if m.is_multiple_of(4) {
            Self::imaginary_unit(m).ok()
        } else if m >= 3 {
            Some(&Self::zeta_power(m, 1) - &Self::zeta_power(m, -1))
        } else {
            None
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            /// Panics on mismatched conductors; use the `checked_` form to
            /// get an error instead.
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            m: self.m,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Polynomial in `z = zeta_m`, e.g. `1/2 - z + 3*z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, q) in self.coeffs().into_iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{a}*z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{a}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})[{}]", self.m, self)
    }
}

impl serde::Serialize for CyclotomicNumber {
    /// `{"m": m, "coeffs": ["p/q", ...]}` with exactly `phi(m)` entries.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<String> = self.coeffs().iter().map(crate::rational::format_rational).collect();
        let mut st = s.serialize_struct("CyclotomicNumber", 2)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            m: u64,
            #[serde(with = "crate::rational::vec_as_string")]
            coeffs: Vec<BigRational>,
        }
        let raw = Raw::deserialize(d)?;
        CyclotomicNumber::from_coeff_vector(raw.m, &raw.coeffs).map_err(serde::de::Error::custom)
    }
}

impl CyclotomicNumber {
    /// Builds an element from exactly `phi(m)` basis coordinates.
    pub fn from_coeff_vector(m: u64, coeffs: &[BigRational]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("conductor must be positive".into()));
        }
        let phi = ntheory::euler_phi(m) as usize;
        if coeffs.len() != phi {
            return Err(Error::Parse(format!(
                "expected {phi} coefficients for conductor {m}, found {}",
                coeffs.len()
            )));
        }
        Ok(Self::from_coeffs(m, coeffs))
    }
}
