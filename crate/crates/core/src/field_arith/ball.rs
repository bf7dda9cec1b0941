//! Certified fixed-point ball arithmetic.
//!
//! A [`RealBall`] at precision `p` stores integers `mid` and `rad >= 0` and
//! stands for the closed interval `[(mid - rad) / 2^p, (mid + rad) / 2^p]`.
//! Every operation rounds outward, so the true value always stays inside.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Round-to-nearest division by `2^s`.
fn round_shift(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (s - 1);
    (x + half).div_floor(&(BigInt::one() << s))
}

/// Upward-rounded division of a nonnegative integer by `2^s`.
fn ceil_shift(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let d = BigInt::one() << s;
    (x + &d - 1u32).div_floor(&d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBall {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl RealBall {
    pub fn zero(prec: u32) -> Self {
        RealBall {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        RealBall {
            mid: v << prec,
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let scaled = q.numer() << prec;
        let (quot, rem) = scaled.div_mod_floor(q.denom());
        if rem.is_zero() {
            return RealBall {
                mid: quot,
                rad: BigInt::zero(),
                prec,
            };
        }
        RealBall {
            mid: quot,
            rad: BigInt::one(),
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(self.mid.clone(), BigInt::one() << self.prec)
    }

    pub fn rad(&self) -> BigRational {
        BigRational::new(self.rad.clone(), BigInt::one() << self.prec)
    }

    pub fn mid_f64(&self) -> f64 {
        let shift = self.prec.saturating_sub(60);
        let m = (&self.mid >> shift).to_f64().unwrap_or(f64::NAN);
        m / 2f64.powi((self.prec - shift) as i32)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        let lo = self.mid() - self.rad();
        let hi = self.mid() + self.rad();
        &lo <= q && q <= &hi
    }

    /// `Some(sign)` when the ball determines the sign.
    pub fn sign(&self) -> Option<i8> {
        if self.mid > self.rad {
            Some(1)
        } else if -&self.mid > self.rad {
            Some(-1)
        } else if self.mid.is_zero() && self.rad.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Upper bound of `|x|`, in units of `2^-prec`.
    pub(crate) fn abs_upper_units(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }

    /// Lower bound of `|x|`, in units of `2^-prec`.
    pub(crate) fn abs_lower_units(&self) -> BigInt {
        let v = self.mid.abs() - &self.rad;
        if v.is_negative() {
            BigInt::zero()
        } else {
            v
        }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        if prec >= self.prec {
            let s = prec - self.prec;
            RealBall {
                mid: &self.mid << s,
                rad: &self.rad << s,
                prec,
            }
        } else {
            let s = self.prec - prec;
            let exact = (&self.mid % (BigInt::one() << s)).is_zero();
            RealBall {
                mid: round_shift(&self.mid, s),
                rad: ceil_shift(&self.rad, s) + if exact { 0 } else { 1 },
                prec,
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        RealBall {
            mid: &self.mid + &o.mid,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        RealBall {
            mid: &self.mid - &o.mid,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        RealBall {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        let p = self.prec;
        let prod = &self.mid * &o.mid;
        let err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let exact = err.is_zero() && (&prod % (BigInt::one() << p)).is_zero();
        RealBall {
            mid: round_shift(&prod, p),
            rad: ceil_shift(&err, p) + if exact { 0 } else { 1 },
            prec: p,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        RealBall {
            mid: &self.mid * k,
            rad: &self.rad * k.abs(),
            prec: self.prec,
        }
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero());
        let ka = k.abs();
        let (q, r) = self.mid.div_mod_floor(k);
        let mid = if r.is_zero() { q } else { round_div(&self.mid, k) };
        let exact = r.is_zero();
        RealBall {
            mid,
            rad: (&self.rad + &ka - 1u32).div_floor(&ka) + if exact { 0 } else { 1 },
            prec: self.prec,
        }
    }

    /// Reciprocal, or `None` when the ball contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        let p = self.prec;
        let m = self.mid.abs();
        let num = BigInt::one() << (2 * p);
        let mid = round_div(&num, &self.mid);
        // |1/x - 1/mid| <= rad / ((|mid| - rad) |mid|), in scaled units
        let denom = (&m - &self.rad) * &m;
        let rad = (&self.rad * &num + &denom - 1u32).div_floor(&denom) + 1u32;
        Some(RealBall { mid, rad, prec: p })
    }
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    // compare 2|r| against |b|
    if (&r * 2u32).abs() >= b.abs() {
        if b.is_positive() {
            q + 1u32
        } else {
            q - 1u32
        }
    } else {
        q
    }
}

/// A certified rectangle in the complex plane: real and imaginary balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedInterval {
    pub re: RealBall,
    pub im: RealBall,
}

impl CertifiedInterval {
    pub fn zero(prec: u32) -> Self {
        CertifiedInterval {
            re: RealBall::zero(prec),
            im: RealBall::zero(prec),
        }
    }

    pub fn from_real(re: RealBall) -> Self {
        let prec = re.prec;
        CertifiedInterval {
            re,
            im: RealBall::zero(prec),
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_real(RealBall::from_rational(q, prec))
    }

    pub fn precision(&self) -> u32 {
        self.re.prec
    }

    pub fn real_mid(&self) -> BigRational {
        self.re.mid()
    }

    pub fn imag_mid(&self) -> BigRational {
        self.im.mid()
    }

    pub fn real_rad(&self) -> BigRational {
        self.re.rad()
    }

    pub fn imag_rad(&self) -> BigRational {
        self.im.rad()
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        CertifiedInterval {
            re: self.re.with_prec(prec),
            im: self.im.with_prec(prec),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        CertifiedInterval {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CertifiedInterval {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn neg(&self) -> Self {
        CertifiedInterval {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        CertifiedInterval {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        CertifiedInterval {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        CertifiedInterval {
            re: self.re.mul_int(k),
            im: self.im.mul_int(k),
        }
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        CertifiedInterval {
            re: self.re.div_int(k),
            im: self.im.div_int(k),
        }
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> Self {
        CertifiedInterval {
            re: self.im.neg(),
            im: self.re.clone(),
        }
    }

    pub fn recip(&self) -> Option<Self> {
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let inv = n.recip()?;
        Some(CertifiedInterval {
            re: self.re.mul(&inv),
            im: self.im.neg().mul(&inv),
        })
    }

    /// Upper bound of `|z|` (as `|re| + |im|`), in units of `2^-prec`.
    pub(crate) fn abs_upper_units(&self) -> BigInt {
        self.re.abs_upper_units() + self.im.abs_upper_units()
    }

    /// Lower bound of `|z|` (as `max(|re|, |im|)`), in units of `2^-prec`.
    pub(crate) fn abs_lower_units(&self) -> BigInt {
        self.re.abs_lower_units().max(self.im.abs_lower_units())
    }
}

const GUARD: u32 = 24;

fn pi_fixed(prec: u32) -> RealBall {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    fn atan_inv(x: u64, w: u32) -> (BigInt, u64) {
        let one = BigInt::one() << w;
        let x2 = BigInt::from(x * x);
        let mut power = one / x;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        let mut ops = 1u64;
        while !power.is_zero() {
            let term = &power / (2 * k + 1);
            if k.is_multiple_of(2) {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            k += 1;
            ops += 2;
        }
        // each truncating division is off by < 1 unit; the tail is below 1 unit
        (sum, ops + 1)
    }
    let w = prec + GUARD;
    let (a, ea) = atan_inv(5, w);
    let (b, eb) = atan_inv(239, w);
    let ball = RealBall {
        mid: a * 16 - b * 4,
        rad: BigInt::from(16 * ea + 4 * eb),
        prec: w,
    };
    ball.with_prec(prec)
}

/// A ball containing `pi`.
pub fn pi(prec: u32) -> RealBall {
    static CACHE: OnceLock<Mutex<HashMap<u32, RealBall>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&prec) {
        return b.clone();
    }
    let b = pi_fixed(prec);
    cache.lock().unwrap().insert(prec, b.clone());
    b
}

/// `(cos x, sin x)` for a ball `0 <= x <= 1.6`, by Taylor series with the
/// alternating tail bound.
fn cos_sin_small(x: &RealBall) -> (RealBall, RealBall) {
    let prec = x.prec;
    let x2 = x.mul(x);
    let one = RealBall::from_int(&BigInt::one(), prec);
    let mut cos = one.clone();
    let mut sin = x.clone();
    let mut term_c = one;
    let mut term_s = x.clone();
    let mut k = 1u64;
    loop {
        term_c = term_c.mul(&x2).div_int(&BigInt::from((2 * k - 1) * (2 * k)));
        term_s = term_s.mul(&x2).div_int(&BigInt::from((2 * k) * (2 * k + 1)));
        if k % 2 == 1 {
            cos = cos.sub(&term_c);
            sin = sin.sub(&term_s);
        } else {
            cos = cos.add(&term_c);
            sin = sin.add(&term_s);
        }
        k += 1;
        if term_c.abs_upper_units() <= BigInt::one() && term_s.abs_upper_units() <= BigInt::one() {
            break;
        }
    }
    // the remaining alternating tails are dominated by the next terms
    let bound_c = term_c.abs_upper_units();
    let bound_s = term_s.abs_upper_units();
    cos.rad += bound_c;
    sin.rad += bound_s;
    (cos, sin)
}

/// A certified rectangle containing `exp(2 pi i q)` for `q` in turns.
pub fn exp_2pi_i(q: &BigRational, prec: u32) -> CertifiedInterval {
    let frac = q - q.floor();
    let four = BigRational::from_integer(4.into());
    let quadrant = (&frac * &four).floor();
    let r = &frac - &quadrant / &four;
    let quadrant = quadrant.to_integer().to_u8().unwrap_or(0) % 4;
    let w = prec + GUARD;
    let (c, s) = if r.is_zero() {
        (RealBall::from_int(&BigInt::one(), w), RealBall::zero(w))
    } else {
        let x = pi(w).mul(&RealBall::from_rational(&(r * BigRational::from_integer(2.into())), w));
        cos_sin_small(&x)
    };
    let (re, im) = match quadrant {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    };
    CertifiedInterval { re, im }.with_prec(prec)
}

/// Table of `exp(2 pi i u / m)` for `u` in `0..m`, cached per `(m, prec)`.
pub(crate) fn roots_table(m: u64, prec: u32) -> Arc<Vec<CertifiedInterval>> {
    type Table = Arc<Vec<CertifiedInterval>>;
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Table>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(m, prec)) {
        return t.clone();
    }
    let table: Vec<CertifiedInterval> = (0..m)
        .map(|u| exp_2pi_i(&BigRational::new(u.into(), m.into()), prec))
        .collect();
    let table = Arc::new(table);
    let mut guard = cache.lock().unwrap();
    if guard.len() > 64 {
        guard.clear();
    }
    guard.insert((m, prec), table.clone());
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pi_is_enclosed() {
        let p = pi(64);
        assert!((p.mid_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(!p.contains(&r(314159265358979, 100000000000000)));
        assert!(p.rad() < r(1, 1 << 60));
        let hi = pi(512);
        assert!(hi.rad() < p.rad());
    }

    #[test]
    fn roots_of_unity_enclosures() {
        for &(n, d) in &[(1i64, 8i64), (3, 8), (1, 5), (2, 5), (7, 12), (0, 1), (1, 4)] {
            let z = exp_2pi_i(&r(n, d), 80);
            let ang = 2.0 * std::f64::consts::PI * n as f64 / d as f64;
            let (re, im) = z.mid_f64();
            assert!((re - ang.cos()).abs() < 1e-14 && (im - ang.sin()).abs() < 1e-14);
            assert!(z.real_rad() < BigRational::new(1.into(), BigInt::one() << 70));
        }
        let i = exp_2pi_i(&r(1, 4), 64);
        assert_eq!(i.re.sign(), Some(0));
        assert_eq!(i.im.sign(), Some(1));
    }

    #[test]
    fn refinement_shrinks_radius() {
        let a = exp_2pi_i(&r(1, 7), 64);
        let b = exp_2pi_i(&r(1, 7), 128);
        assert!(b.real_rad() < a.real_rad());
        assert!(a.re.contains(&b.real_mid()));
    }

    #[test]
    fn reciprocal_encloses() {
        let x = RealBall::from_rational(&r(3, 7), 64);
        let y = x.recip().unwrap();
        assert!(y.contains(&r(7, 3)));
        assert!(RealBall::zero(64).recip().is_none());
        let z = CertifiedInterval {
            re: RealBall::from_rational(&r(1, 1), 64),
            im: RealBall::from_rational(&r(1, 1), 64),
        };
        let w = z.recip().unwrap();
        assert!(w.re.contains(&r(1, 2)) && w.im.contains(&r(-1, 2)));
    }
}
