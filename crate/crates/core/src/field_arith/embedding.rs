//! Involution-preserving embeddings `Q(zeta_m) -> C` and certified signs.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ball::{roots_table, CertifiedInterval};
use super::cyclotomic::CyclotomicNumber;
use super::ntheory;
use crate::error::{Error, Result};
use crate::settings::Settings;

/// The embedding `rho_k : zeta_m -> exp(2 pi i k / m)`.
///
/// Cyclotomic Galois groups are abelian, so every `rho_k` commutes with
/// complex conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Embedding {
    conductor: u64,
    exponent: u64,
}

impl Embedding {
    pub fn new(m: u64, k: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("conductor must be positive".into()));
        }
        if m <= 2 {
            return Ok(Self::identity(m));
        }
        let k = k % m;
        if k.gcd(&m) != 1 {
            return Err(Error::InvalidEmbedding { m, k });
        }
        Ok(Embedding {
            conductor: m,
            exponent: k,
        })
    }

    pub fn identity(m: u64) -> Self {
        Embedding {
            conductor: m,
            exponent: 1,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The complex-conjugate embedding `rho_{m-k}`.
    pub fn conjugate(&self) -> Self {
        if self.conductor <= 2 {
            return *self;
        }
        Embedding {
            conductor: self.conductor,
            exponent: self.conductor - self.exponent,
        }
    }

    /// Apply to an element: the result is again in `Q(zeta_m)` and is then
    /// read through the standard embedding `zeta_m -> exp(2 pi i / m)`.
    pub fn apply(&self, x: &CyclotomicNumber) -> CyclotomicNumber {
        debug_assert_eq!(x.conductor(), self.conductor);
        if self.exponent == 1 {
            x.clone()
        } else {
            x.apply_galois(self.exponent)
        }
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rho_{} on Q(zeta_{})", self.exponent, self.conductor)
    }
}

/// One embedding per conjugate pair `{k, m-k}`, smallest representative
/// first.
pub fn embeddings_g0(m: u64) -> Vec<Embedding> {
    if m <= 2 {
        return vec![Embedding::identity(m)];
    }
    ntheory::units(m)
        .into_iter()
        .filter(|&k| k < m - k)
        .map(|k| Embedding {
            conductor: m,
            exponent: k,
        })
        .collect()
}

/// Certified enclosure of `rho(x)` at the given absolute precision (bits).
pub fn embed_numeric(x: &CyclotomicNumber, rho: &Embedding, precision: u32) -> CertifiedInterval {
    assert_eq!(x.conductor(), rho.conductor, "embedding conductor mismatch");
    let m = x.conductor();
    let (num, den) = x.int_coeffs();
    if x.is_zero() {
        return CertifiedInterval::zero(precision);
    }
    let table = roots_table(m.max(1), precision);
    let k = rho.exponent;
    let mut acc = CertifiedInterval::zero(precision);
    for (i, c) in num.iter().enumerate() {
        if c.is_zero_like() {
            continue;
        }
        let idx = ((i as u128 * k as u128) % m as u128) as usize;
        acc = acc.add(&table[idx].mul_int(c));
    }
    acc.div_int(den)
}

trait ZeroLike {
    fn is_zero_like(&self) -> bool;
}

impl ZeroLike for num_bigint::BigInt {
    fn is_zero_like(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Exact sign of the real number `rho(x)`.
///
/// Zero is decided by the canonical representation; otherwise the numeric
/// enclosure is refined (doubling precision) until it excludes zero.
pub fn real_sign(x: &CyclotomicNumber, rho: &Embedding) -> Result<i8> {
    real_sign_with(x, rho, &Settings::default())
}

pub fn real_sign_with(x: &CyclotomicNumber, rho: &Embedding, settings: &Settings) -> Result<i8> {
    twisted_sign(x, rho, false, settings)
}

/// Sign of `rho(x)` when `twist` is false, of `i * rho(x)` when true (the
/// `sqrt(epsilon)` twist for skew-hermitian forms).
pub(crate) fn twisted_sign(
    x: &CyclotomicNumber,
    rho: &Embedding,
    twist: bool,
    settings: &Settings,
) -> Result<i8> {
    if x.is_zero() {
        return Ok(0);
    }
    if let Some(q) = x.as_rational() {
        if !twist {
            return Ok(if q > num_rational::BigRational::from_integer(0.into()) { 1 } else { -1 });
        }
    }
    for prec in settings.precisions() {
        let v = embed_numeric(x, rho, prec);
        let s = if twist { v.im.sign().map(|s| -s) } else { v.re.sign() };
        if let Some(s) = s {
            if s != 0 {
                return Ok(s);
            }
        }
    }
    Err(Error::RefinementBudget {
        what: format!("determining the sign of {x} under {rho}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn golden(m: u64) -> CyclotomicNumber {
        &CyclotomicNumber::zeta_power(m, 1) + &CyclotomicNumber::zeta_power(m, -1)
    }

    #[test]
    fn g0_enumeration() {
        let ks = |m| embeddings_g0(m).iter().map(|e| e.exponent()).collect::<Vec<_>>();
        assert_eq!(ks(1), vec![1]);
        assert_eq!(ks(2), vec![1]);
        assert_eq!(ks(5), vec![1, 2]);
        assert_eq!(ks(12), vec![1, 5]);
        for m in 3..60 {
            let g = embeddings_g0(m);
            assert_eq!(g.len() as u64, ntheory::euler_phi(m) / 2);
            for a in &g {
                for b in &g {
                    assert_ne!((a.exponent() + b.exponent()) % m, 0);
                }
            }
        }
    }

    #[test]
    fn numeric_golden_ratio_embeddings() {
        let x = golden(5);
        let v1 = embed_numeric(&x, &Embedding::identity(5), 64);
        let v2 = embed_numeric(&x, &Embedding::new(5, 2).unwrap(), 64);
        assert!((v1.mid_f64().0 - 0.6180339887).abs() < 1e-9);
        assert!((v2.mid_f64().0 + 1.6180339887).abs() < 1e-9);
        assert!(!v1.re.contains_zero());
        let z = embed_numeric(&CyclotomicNumber::zero(5), &Embedding::identity(5), 64);
        assert_eq!(z.real_mid(), BigRational::from_integer(0.into()));
        assert_eq!(z.real_rad(), BigRational::from_integer(0.into()));
    }

    #[test]
    fn exact_signs() {
        let x = golden(5);
        assert_eq!(real_sign(&x, &Embedding::identity(5)).unwrap(), 1);
        assert_eq!(real_sign(&x, &Embedding::new(5, 2).unwrap()).unwrap(), -1);
        let zero = &CyclotomicNumber::one(4) + &CyclotomicNumber::zeta_power(4, 2);
        assert_eq!(real_sign(&zero, &Embedding::identity(4)).unwrap(), 0);
    }

    #[test]
    fn invalid_exponent_rejected() {
        assert_eq!(Embedding::new(4, 2), Err(Error::InvalidEmbedding { m: 4, k: 2 }));
    }
}
