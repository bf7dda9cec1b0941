//! Rational functions over `Q(zeta_m)` with the involution
//! `t -> 1/t` plus coefficient conjugation.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPoly;
use super::poly::Poly;
use crate::field_arith::{embed_numeric, ntheory, CertifiedInterval, CyclotomicNumber, Embedding};
use crate::linalg::Scalar;
use crate::{Error, Result};

/// `t^shift * num(t) / den(t)` in canonical form: `num(0) != 0`, `den`
/// monic with `den(0) != 0`, and `gcd(num, den) = 1`. Zero is stored as
/// `0 / 1` with shift 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    m: u64,
    shift: i64,
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn zero(m: u64) -> Self {
        RationalFunction {
            m,
            shift: 0,
            num: Poly::zero(m),
            den: Poly::one(m),
        }
    }

    pub fn one(m: u64) -> Self {
        Self::constant(CyclotomicNumber::one(m))
    }

    pub fn constant(c: CyclotomicNumber) -> Self {
        Self::from_laurent(&LaurentPoly::constant(c))
    }

    pub fn from_integer(m: u64, v: i64) -> Self {
        Self::constant(CyclotomicNumber::from_integer(m, v))
    }

    pub fn from_rational(m: u64, q: &BigRational) -> Self {
        Self::constant(CyclotomicNumber::from_rational(m, q))
    }

    /// The variable `t`.
    pub fn t(m: u64) -> Self {
        Self::t_power(m, 1)
    }

    pub fn t_power(m: u64, e: i64) -> Self {
        Self::from_laurent(&LaurentPoly::t_power(m, e))
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let (shift, num) = p.to_shifted_poly();
        RationalFunction {
            m: p.conductor(),
            shift,
            num,
            den: Poly::one(p.conductor()),
        }
    }

    /// `num / den`; fails when `den = 0`.
    pub fn from_parts(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.conductor() != den.conductor() {
            return Err(Error::ConductorMismatch {
                left: num.conductor(),
                right: den.conductor(),
            });
        }
        let (sn, n) = num.to_shifted_poly();
        let (sd, d) = den.to_shifted_poly();
        Ok(Self::canonical(num.conductor(), sn - sd, n, d, true))
    }

    /// `t^shift * num / den` for polynomials `num`, `den != 0`.
    pub fn from_polys(shift: i64, num: &Poly, den: &Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num.conductor(), shift, num.clone(), den.clone(), true))
    }

    fn canonical(m: u64, mut shift: i64, num: Poly, den: Poly, reduce: bool) -> Self {
        if num.is_zero() {
            return Self::zero(m);
        }
        let zn = num.trailing_zeros();
        let zd = den.trailing_zeros();
        shift += zn as i64 - zd as i64;
        let mut num = num.shift_down(zn);
        let mut den = den.shift_down(zd);
        if reduce && den.degree() != Some(0) {
            let g = num.gcd(&den);
            if g.degree().is_some_and(|d| d > 0) {
                num = num.exact_div(&g).expect("gcd divides");
                den = den.exact_div(&g).expect("gcd divides");
            }
        }
        let lead = den.lead().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { m, shift, num, den }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.den.degree() == Some(0) && self.num.degree() == Some(0) && self.num.coeffs()[0].is_one()
    }

    /// The exponent `s` in `t^s num / den`.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Numerator polynomial, with nonzero constant term.
    pub fn numerator_poly(&self) -> &Poly {
        &self.num
    }

    /// Monic denominator polynomial, with nonzero constant term.
    pub fn denominator_poly(&self) -> &Poly {
        &self.den
    }

    /// Numerator as a Laurent polynomial (`t^shift * num`).
    pub fn num(&self) -> LaurentPoly {
        LaurentPoly::from_shifted_poly(self.shift, &self.num)
    }

    pub fn den(&self) -> LaurentPoly {
        LaurentPoly::from_shifted_poly(0, &self.den)
    }

    /// The value if the function is constant.
    pub fn as_constant(&self) -> Option<CyclotomicNumber> {
        if self.is_zero() {
            return Some(CyclotomicNumber::zero(self.m));
        }
        (self.shift == 0 && self.num.degree() == Some(0) && self.den.degree() == Some(0))
            .then(|| self.num.coeffs()[0].clone())
    }

    /// The Laurent polynomial if the denominator is trivial.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        (self.den.degree() == Some(0)).then(|| self.num())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.m != o.m {
            Err(Error::ConductorMismatch { left: self.m, right: o.m })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.add_signed(o, false))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.add_signed(o, true))
    }

    fn add_signed(&self, o: &Self, negate: bool) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        let s = self.shift.min(o.shift);
        let a = self.num.shift_up((self.shift - s) as usize);
        let b = o.num.shift_up((o.shift - s) as usize);
        let (num, den) = if self.den == o.den {
            (if negate { a.sub(&b) } else { a.add(&b) }, self.den.clone())
        } else {
            let l = a.mul(&o.den);
            let r = b.mul(&self.den);
            (if negate { l.sub(&r) } else { l.add(&r) }, self.den.mul(&o.den))
        };
        Self::canonical(self.m, s, num, den, true)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.m));
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1)?;
        let d2 = o.den.exact_div(&g1)?;
        let n2 = o.num.exact_div(&g2)?;
        let d1 = self.den.exact_div(&g2)?;
        Ok(Self::canonical(self.m, self.shift + o.shift, n1.mul(&n2), d1.mul(&d2), false))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.m, -self.shift, self.den.clone(), self.num.clone(), false))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.checked_mul(&o.inv()?)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            m: self.m,
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        if c.is_zero() {
            return Self::zero(self.m);
        }
        RationalFunction {
            m: self.m,
            shift: self.shift,
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.m);
        for _ in 0..e.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }

    /// The involution: conjugate coefficients and substitute `t -> 1/t`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        Self::canonical(
            self.m,
            -self.shift - dn + dd,
            self.num.conj_reverse(),
            self.den.conj_reverse(),
            false,
        )
    }

    /// Apply `zeta_m -> zeta_m^k` to every coefficient.
    pub fn apply_galois(&self, k: u64) -> Self {
        if self.m <= 2 {
            return self.clone();
        }
        RationalFunction {
            m: self.m,
            shift: self.shift,
            num: self.num.apply_galois(k),
            den: self.den.apply_galois(k),
        }
    }

    /// The same function over `Q(zeta_target)`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        Ok(RationalFunction {
            m: target,
            shift: self.shift,
            num: self.num.lift(target)?,
            den: self.den.lift(target)?,
        })
    }

    /// Exact value at `t = zeta_n^j`, an element of `Q(zeta_lcm(m, n))`.
    pub fn eval_root_of_unity(&self, n: u64, j: i64) -> Result<CyclotomicNumber> {
        if n == 0 {
            return Err(Error::InvalidArgument("root of unity order must be positive".into()));
        }
        let l = ntheory::lcm(self.m, n);
        let step = (l / n) as i64 * j.rem_euclid(n as i64);
        let eval = |p: &Poly| -> Result<CyclotomicNumber> {
            let mut acc = CyclotomicNumber::zero(l);
            for (i, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    let term = c.lift_to_compositum(l)?.mul_zeta_power(step * i as i64 % l as i64);
                    acc = &acc + &term;
                }
            }
            Ok(acc)
        };
        let d = eval(&self.den)?;
        if d.is_zero() {
            return Err(Error::Pole {
                n,
                j: j.rem_euclid(n as i64) as u64,
            });
        }
        let v = eval(&self.num)?;
        Ok((&v * &d.inv()?).mul_zeta_power(step * self.shift % l as i64))
    }

    /// Exact value of `rho(self)` at `t = zeta_n^j`.
    pub fn eval_under(&self, rho: &Embedding, n: u64, j: i64) -> Result<CyclotomicNumber> {
        self.apply_galois(rho.exponent()).eval_root_of_unity(n, j)
    }

    /// Certified enclosure of `rho(self)(z)` for a rectangle `z`.
    pub fn eval_numeric(&self, rho: &Embedding, z: &CertifiedInterval, precision: u32) -> Result<CertifiedInterval> {
        let z = z.with_prec(precision);
        let num = NumericPoly::new(&self.num, rho, precision).eval(&z);
        let den = NumericPoly::new(&self.den, rho, precision).eval(&z);
        let inv = den.recip().ok_or(Error::Indeterminate)?;
        let mut v = num.mul(&inv);
        if self.shift != 0 {
            let base = if self.shift < 0 {
                z.recip().ok_or(Error::Indeterminate)?
            } else {
                z.clone()
            };
            for _ in 0..self.shift.unsigned_abs() {
                v = v.mul(&base);
            }
        }
        Ok(v)
    }
}

/// A polynomial with certified complex coefficients `rho(c_i)`.
#[derive(Clone, Debug)]
pub(crate) struct NumericPoly {
    pub coeffs: Vec<CertifiedInterval>,
}

impl NumericPoly {
    pub fn new(p: &Poly, rho: &Embedding, precision: u32) -> Self {
        NumericPoly {
            coeffs: p.coeffs().iter().map(|c| embed_numeric(c, rho, precision)).collect(),
        }
    }

    pub fn eval(&self, z: &CertifiedInterval) -> CertifiedInterval {
        let prec = z.precision();
        let mut acc = CertifiedInterval::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    /// Value at `zeta_n^j` using the cached table of roots of unity.
    pub fn eval_root(&self, table: &[CertifiedInterval], j: u64) -> CertifiedInterval {
        let n = table.len() as u64;
        let prec = table[0].precision();
        let mut acc = CertifiedInterval::zero(prec);
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = ((i as u128 * j as u128) % n as u128) as usize;
            acc = acc.add(&c.mul(&table[idx]));
        }
        acc
    }
}

impl Scalar for RationalFunction {
    fn zero_like(&self) -> Self {
        Self::zero(self.m)
    }
    fn one_like(&self) -> Self {
        Self::one(self.m)
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.checked_add(o).expect("conductor mismatch")
    }
    fn minus(&self, o: &Self) -> Self {
        self.checked_sub(o).expect("conductor mismatch")
    }
    fn times(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("conductor mismatch")
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn conj(&self) -> Self {
        self.bar()
    }
    fn skew_unit_like(&self) -> Option<Self> {
        Some(match CyclotomicNumber::skew_unit(self.m) {
            Some(s) => Self::constant(s),
            None => Self::t(self.m).minus(&Self::t_power(self.m, -1)),
        })
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num())
        } else {
            write!(f, "({}) / ({})", self.num(), self.den())
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction[m={}]({})", self.m, self)
    }
}

#[derive(Serialize, Deserialize)]
struct RawRational {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Serialize for RationalFunction {
    /// `{"num": LaurentPoly, "den": LaurentPoly}`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawRational {
            num: self.num(),
            den: self.den(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRational::deserialize(d)?;
        RationalFunction::from_parts(&raw.num, &raw.den).map_err(serde::de::Error::custom)
    }
}

impl RationalFunction {
    /// Parses a JSON entry: either `{"num", "den"}` or an expression string
    /// in `t`, `z = zeta_m` and `i` (see [`super::parse_expression`]).
    pub fn from_json(m: u64, v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => super::parse_expression(m, s),
            serde_json::Value::Number(_) => super::parse_expression(m, &v.to_string()),
            _ => {
                let r: RationalFunction =
                    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                if r.m != m {
                    return Err(Error::ConductorMismatch { left: m, right: r.m });
                }
                Ok(r)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn lp(m: u64, terms: &[(i64, i64)]) -> RationalFunction {
        RationalFunction::from_laurent(&LaurentPoly::from_integer_terms(m, terms))
    }

    #[test]
    fn basic_identities() {
        let t = RationalFunction::t(1);
        let tinv = RationalFunction::t_power(1, -1);
        assert!(t.times(&tinv).is_one());
        let a = lp(1, &[(0, 1), (1, -1)]);
        let b = lp(1, &[(0, 1), (-1, -1)]);
        assert_eq!(a.plus(&b), lp(1, &[(0, 2), (1, -1), (-1, -1)]));
        assert!(a.checked_div(&a).unwrap().is_one());
    }

    #[test]
    fn bar_of_geometric_series() {
        let one = RationalFunction::one(1);
        let a = one.checked_div(&lp(1, &[(0, 1), (1, -1)])).unwrap();
        // 1/(1 - 1/t) = -t / (1 - t)
        let expected = lp(1, &[(1, -1)]).checked_div(&lp(1, &[(0, 1), (1, -1)])).unwrap();
        assert_eq!(a.bar(), expected);
        assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn bar_conjugates_coefficients() {
        let i = CyclotomicNumber::imaginary_unit(4).unwrap();
        let it = RationalFunction::t(4).scale(&i);
        assert_eq!(it.bar(), RationalFunction::t_power(4, -1).scale(&-&i));
    }

    #[test]
    fn evaluation_at_roots_of_unity() {
        let a = lp(1, &[(1, 1), (-1, 1)]);
        let v = a.eval_root_of_unity(8, 1).unwrap();
        assert_eq!(v, &CyclotomicNumber::zeta_power(8, 1) + &CyclotomicNumber::zeta_power(8, 7));
        assert_eq!(&v * &v, CyclotomicNumber::from_integer(8, 2));
        let pole = RationalFunction::one(1).checked_div(&lp(1, &[(0, 1), (1, -1)])).unwrap();
        assert_eq!(pole.eval_root_of_unity(1, 0), Err(Error::Pole { n: 1, j: 0 }));
        assert!(RationalFunction::one(3).eval_root_of_unity(7, 2).unwrap().is_one());
    }

    #[test]
    fn numeric_evaluation() {
        let rho = Embedding::identity(1);
        let a = lp(1, &[(0, 2), (1, -1), (-1, -1)]);
        let z = crate::field_arith::exp_2pi_i(&rat(1, 2), 64);
        let v = a.eval_numeric(&rho, &z, 64).unwrap();
        assert!((v.mid_f64().0 - 4.0).abs() < 1e-12);
        let pole = RationalFunction::one(1).checked_div(&lp(1, &[(0, 1), (1, -1)])).unwrap();
        let one = CertifiedInterval::from_rational(&rat(1, 1), 64);
        assert_eq!(pole.eval_numeric(&rho, &one, 64), Err(Error::Indeterminate));
    }
}
