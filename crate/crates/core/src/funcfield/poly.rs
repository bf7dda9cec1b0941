//! Dense univariate polynomials over `Q(zeta_m)`.

use std::fmt;

use crate::field_arith::CyclotomicNumber;
use crate::{Error, Result};

/// Polynomial with coefficients in `Q(zeta_m)`, lowest degree first, no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    m: u64,
    coeffs: Vec<CyclotomicNumber>,
}

impl Poly {
    pub fn zero(m: u64) -> Self {
        Poly { m, coeffs: Vec::new() }
    }

    pub fn one(m: u64) -> Self {
        Self::constant(CyclotomicNumber::one(m))
    }

    pub fn constant(c: CyclotomicNumber) -> Self {
        Self::new(c.conductor(), vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: CyclotomicNumber, k: usize) -> Self {
        let m = c.conductor();
        let mut coeffs = vec![CyclotomicNumber::zero(m); k];
        coeffs.push(c);
        Self::new(m, coeffs)
    }

    pub fn new(m: u64, mut coeffs: Vec<CyclotomicNumber>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.conductor() == m));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { m, coeffs }
    }

    /// Polynomial with rational integer coefficients, lifted into `Q(zeta_m)`.
    pub fn from_integers(m: u64, coeffs: &[i64]) -> Self {
        Self::new(
            m,
            coeffs.iter().map(|&c| CyclotomicNumber::from_integer(m, c)).collect(),
        )
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&CyclotomicNumber> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> CyclotomicNumber {
        self.coeffs.get(i).cloned().unwrap_or_else(|| CyclotomicNumber::zero(self.m))
    }

    /// Largest `k` with `t^k | self` (0 for the zero polynomial).
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count().min(self.coeffs.len())
    }

    /// Divide by `t^k`, assuming `t^k` divides.
    pub fn shift_down(&self, k: usize) -> Self {
        Poly {
            m: self.m,
            coeffs: self.coeffs[k.min(self.coeffs.len())..].to_vec(),
        }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![CyclotomicNumber::zero(self.m); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { m: self.m, coeffs }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) if negate => a - b,
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) if negate => -b,
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(self.m, coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.m);
        }
        if self.coeffs.len() == 1 {
            return o.scale(&self.coeffs[0]);
        }
        if o.coeffs.len() == 1 {
            return self.scale(&o.coeffs[0]);
        }
        let mut out = vec![CyclotomicNumber::zero(self.m); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::new(self.m, out)
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        if c.is_one() {
            return self.clone();
        }
        Self::new(self.m, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.m);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division `self = q d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(sd) = self.degree() else {
            return Ok((Self::zero(self.m), Self::zero(self.m)));
        };
        if sd < dd {
            return Ok((Self::zero(self.m), self.clone()));
        }
        let inv_lead = d.coeffs[dd].inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![CyclotomicNumber::zero(self.m); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &r[k + dd] * &inv_lead;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    r[k + i] = &r[k + i] - &(&c * dc);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(self.m, q), Self::new(self.m, r)))
    }

    /// Quotient of an exact division.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Consistency("polynomial division was not exact".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), o.monic());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return Self::one(self.m);
            }
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &CyclotomicNumber) -> CyclotomicNumber {
        let mut acc = CyclotomicNumber::zero(self.m);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.m,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale_int(i as i64)).collect(),
        )
    }

    pub fn map_coeffs(&self, f: impl Fn(&CyclotomicNumber) -> CyclotomicNumber) -> Self {
        let coeffs: Vec<_> = self.coeffs.iter().map(f).collect();
        let m = coeffs.first().map_or(self.m, |c| c.conductor());
        Self::new(m, coeffs)
    }

    /// `t^deg * conj(self)(1/t)`: coefficients conjugated and reversed.
    pub fn conj_reverse(&self) -> Self {
        Self::new(self.m, self.coeffs.iter().rev().map(|c| c.conjugate()).collect())
    }

    pub fn apply_galois(&self, k: u64) -> Self {
        self.map_coeffs(|c| c.apply_galois(k))
    }

    /// The same polynomial with coefficients in `Q(zeta_target)`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.lift_to_compositum(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(target, coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate().map(|(i, c)| (i as i64, c)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[m={}]({})", self.m, self)
    }
}

/// Writes `sum c_e t^e`, skipping zero terms.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a CyclotomicNumber)>,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        let cs = if c.as_rational().is_some() {
            c.to_string()
        } else {
            format!("({c})")
        };
        match e {
            0 => write!(f, "{cs}")?,
            1 if c.is_one() => write!(f, "t")?,
            1 => write!(f, "{cs}*t")?,
            _ if c.is_one() => write!(f, "t^{e}")?,
            _ => write!(f, "{cs}*t^{e}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
