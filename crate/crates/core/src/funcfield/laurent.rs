//! Sparse Laurent polynomials over `Q(zeta_m)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::poly::{write_terms, Poly};
use crate::field_arith::CyclotomicNumber;
use crate::{Error, Result};

/// `sum_e c_e t^e` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    m: u64,
    terms: BTreeMap<i64, CyclotomicNumber>,
}

impl LaurentPoly {
    pub fn zero(m: u64) -> Self {
        LaurentPoly {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CyclotomicNumber) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: CyclotomicNumber, e: i64) -> Self {
        let mut p = Self::zero(c.conductor());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// `t^e` over `Q(zeta_m)`.
    pub fn t_power(m: u64, e: i64) -> Self {
        Self::monomial(CyclotomicNumber::one(m), e)
    }

    pub fn from_terms(m: u64, terms: impl IntoIterator<Item = (i64, CyclotomicNumber)>) -> Result<Self> {
        let mut p = Self::zero(m);
        for (e, c) in terms {
            if c.conductor() != m {
                return Err(Error::ConductorMismatch {
                    left: m,
                    right: c.conductor(),
                });
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    /// Rational integer coefficients, `(exponent, value)` pairs.
    pub fn from_integer_terms(m: u64, terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero(m);
        for &(e, c) in terms {
            p.add_term(e, &CyclotomicNumber::from_integer(m, c));
        }
        p
    }

    fn add_term(&mut self, e: i64, c: &CyclotomicNumber) {
        let v = match self.terms.get(&e) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CyclotomicNumber)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, e: i64) -> CyclotomicNumber {
        self.terms.get(&e).cloned().unwrap_or_else(|| CyclotomicNumber::zero(self.m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (&e, c) in &o.terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            m: self.m,
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.m);
        for (&a, x) in &self.terms {
            for (&b, y) in &o.terms {
                p.add_term(a + b, &(x * y));
            }
        }
        p
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        let mut p = Self::zero(self.m);
        for (&e, x) in &self.terms {
            p.add_term(e, &(x * c));
        }
        p
    }

    /// Coefficient conjugation composed with `t -> 1/t`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            m: self.m,
            terms: self.terms.iter().map(|(&e, c)| (-e, c.conjugate())).collect(),
        }
    }

    pub fn apply_galois(&self, k: u64) -> Self {
        LaurentPoly {
            m: self.m,
            terms: self.terms.iter().map(|(&e, c)| (e, c.apply_galois(k))).collect(),
        }
    }

    /// `(s, q)` with `self = t^s q` and `q(0) != 0` (or `q = 0`, `s = 0`).
    pub fn to_shifted_poly(&self) -> (i64, Poly) {
        let Some(lo) = self.min_exponent() else {
            return (0, Poly::zero(self.m));
        };
        let hi = self.max_exponent().unwrap();
        let mut coeffs = vec![CyclotomicNumber::zero(self.m); (hi - lo + 1) as usize];
        for (&e, c) in &self.terms {
            coeffs[(e - lo) as usize] = c.clone();
        }
        (lo, Poly::new(self.m, coeffs))
    }

    pub fn from_shifted_poly(shift: i64, p: &Poly) -> Self {
        let mut out = Self::zero(p.conductor());
        for (i, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert(shift + i as i64, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent[m={}]({})", self.m, self)
    }
}

#[derive(Serialize, Deserialize)]
struct RawLaurent {
    m: u64,
    terms: BTreeMap<String, serde_json::Value>,
}

impl Serialize for LaurentPoly {
    /// `{"m": m, "terms": {"<exp>": ["p/q", ...]}}`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let coeffs: Vec<String> = c.coeffs().iter().map(crate::rational::format_rational).collect();
                (e.to_string(), serde_json::Value::from(coeffs))
            })
            .collect();
        RawLaurent { m: self.m, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawLaurent::deserialize(d)?;
        let mut p = LaurentPoly::zero(raw.m);
        for (e, v) in &raw.terms {
            let e: i64 = e
                .trim()
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("invalid exponent {e:?}")))?;
            let c = coefficient_from_json(raw.m, v).map_err(serde::de::Error::custom)?;
            p.add_term(e, &c);
        }
        Ok(p)
    }
}

/// A coefficient given as `["p/q", ...]`, as `{"m", "coeffs"}`, or as a
/// single rational.
pub(crate) fn coefficient_from_json(m: u64, v: &serde_json::Value) -> Result<CyclotomicNumber> {
    match v {
        serde_json::Value::Array(items) => {
            let qs = items
                .iter()
                .map(crate::rational::value_to_rational)
                .collect::<Result<Vec<BigRational>>>()?;
            CyclotomicNumber::from_coeff_vector(m, &qs)
        }
        serde_json::Value::Object(_) => {
            let c: CyclotomicNumber =
                serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            if c.conductor() != m {
                return Err(Error::ConductorMismatch {
                    left: m,
                    right: c.conductor(),
                });
            }
            Ok(c)
        }
        other => Ok(CyclotomicNumber::from_rational(m, &crate::rational::value_to_rational(other)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_is_involutive() {
        let i = CyclotomicNumber::imaginary_unit(4).unwrap();
        let p = LaurentPoly::from_terms(4, [(1, i.clone()), (-2, CyclotomicNumber::from_integer(4, 3))]).unwrap();
        assert_eq!(p.bar().bar(), p);
        assert_eq!(p.bar().coeff(-1), -&i);
    }

    #[test]
    fn shifted_poly_roundtrip() {
        let p = LaurentPoly::from_integer_terms(1, &[(-1, 1), (2, -3)]);
        let (s, q) = p.to_shifted_poly();
        assert_eq!(s, -1);
        assert_eq!(q, Poly::from_integers(1, &[1, 0, 0, -3]));
        assert_eq!(LaurentPoly::from_shifted_poly(s, &q), p);
    }

    #[test]
    fn json_roundtrip() {
        let p = LaurentPoly::from_integer_terms(5, &[(-1, 1), (0, 2)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"m":5,"terms":{"-1":["1/1","0/1","0/1","0/1"],"0":["2/1","0/1","0/1","0/1"]}}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
