//! Word-size modular arithmetic and the multimodular inversion used for
//! large cyclotomic fields.
//!
//! For primes `P = 1 (mod m)` the cyclotomic polynomial splits into distinct
//! linear factors over `F_P`, so `Q(zeta_m)` reduces to a product of copies of
//! `F_P` indexed by the primitive `m`-th roots of unity. Inversion there is
//! pointwise; coefficients are recovered by CRT and rational reconstruction
//! and the result is verified by one exact multiplication.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ntheory;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic sequence of primes `P = 1 (mod m)` below `2^62`, descending.
pub(crate) struct SplittingPrimes {
    m: u64,
    k: u64,
}

impl SplittingPrimes {
    pub(crate) fn new(m: u64) -> Self {
        SplittingPrimes {
            m,
            k: ((1u64 << 62) - 1) / m,
        }
    }
}

impl Iterator for SplittingPrimes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.k > 0 {
            let p = self.m * self.k + 1;
            self.k -= 1;
            if is_prime_u64(p) {
                return Some(p);
            }
        }
        None
    }
}

/// A primitive `m`-th root of unity modulo a prime `p = 1 (mod m)`.
pub(crate) fn primitive_root_of_unity(m: u64, p: u64) -> u64 {
    let qs: Vec<u64> = ntheory::factor(m).into_iter().map(|(q, _)| q).collect();
    for g in 2.. {
        let w = pow_mod(g, (p - 1) / m, p);
        if w == 0 {
            continue;
        }
        if qs.iter().all(|&q| pow_mod(w, m / q, p) != 1) {
            return w;
        }
    }
    unreachable!()
}

pub(crate) fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Rational reconstruction of `u mod modulus` with balanced bounds.
pub(crate) fn rational_reconstruct(u: &BigInt, modulus: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (modulus / 2u32).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), u.mod_floor(modulus));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    if s1.is_negative() {
        Some((-r1, -s1))
    } else {
        Some((r1, s1))
    }
}

/// Inverse of `num / den` in `Q(zeta_m)` (with `phi = deg Phi_m`), returned as
/// an integer numerator vector over a common denominator, unnormalised.
/// The caller verifies the product; `None` means the prime supply ran out.
pub(crate) fn inverse_candidates(
    num: &[BigInt],
    den: &BigInt,
    m: u64,
    phi_poly: &[BigInt],
    mut accept: impl FnMut(&[BigInt], &BigInt) -> bool,
) -> Option<(Vec<BigInt>, BigInt)> {
    let phi = num.len();
    let unit_list = ntheory::units(m);
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); phi];
    let mut used = 0usize;
    let mut next_check = 1usize;
    for p in SplittingPrimes::new(m) {
        if reduce_mod(den, p) == 0 {
            continue;
        }
        let w = primitive_root_of_unity(m, p);
        let mut pw = Vec::with_capacity(m as usize);
        let mut acc = 1u64;
        for _ in 0..m {
            pw.push(acc);
            acc = mul_mod(acc, w, p);
        }
        let a: Vec<u64> = num.iter().map(|c| reduce_mod(c, p)).collect();
        let den_p = reduce_mod(den, p);
        // values of 1/a at the primitive roots w^u
        let mut vals = Vec::with_capacity(unit_list.len());
        let mut bad = false;
        for &u in &unit_list {
            let mut s = 0u64;
            for (i, &ai) in a.iter().enumerate() {
                if ai != 0 {
                    let e = (u as u128 * i as u128 % m as u128) as usize;
                    s = (s + mul_mod(ai, pw[e], p)) % p;
                }
            }
            if s == 0 {
                bad = true;
                break;
            }
            vals.push(mul_mod(inv_mod(s, p), den_p, p));
        }
        if bad {
            continue;
        }
        // interpolate in F_p[x]/(x^m - 1), zero on the non-primitive roots
        let m_inv = inv_mod(m % p, p);
        let mut buf = vec![0u64; m as usize];
        for (e, slot) in buf.iter_mut().enumerate() {
            let mut s = 0u64;
            for (&u, &v) in unit_list.iter().zip(&vals) {
                let idx = (m - (u as u128 * e as u128 % m as u128) as u64) % m;
                s = (s + mul_mod(v, pw[idx as usize], p)) % p;
            }
            *slot = mul_mod(s, m_inv, p);
        }
        // reduce modulo Phi_m
        let phi_p: Vec<u64> = phi_poly.iter().map(|c| reduce_mod(c, p)).collect();
        for e in (phi..buf.len()).rev() {
            let c = buf[e];
            if c == 0 {
                continue;
            }
            for (i, &pi) in phi_p[..phi].iter().enumerate() {
                if pi != 0 {
                    let t = &mut buf[e - phi + i];
                    *t = (*t + p - mul_mod(c, pi, p)) % p;
                }
            }
        }
        buf.truncate(phi);
        // CRT
        let pb = BigInt::from(p);
        let minv = BigInt::from(inv_mod(reduce_mod(&modulus, p), p));
        for (r, &b) in residues.iter_mut().zip(&buf) {
            let diff = (BigInt::from(b) - &*r).mod_floor(&pb);
            let t = (diff * &minv).mod_floor(&pb);
            *r += &modulus * t;
        }
        modulus *= &pb;
        used += 1;
        if used >= next_check {
            next_check *= 2;
            if let Some((cand_num, cand_den)) = reconstruct_all(&residues, &modulus) {
                if accept(&cand_num, &cand_den) {
                    return Some((cand_num, cand_den));
                }
            }
        }
    }
    None
}

fn reconstruct_all(residues: &[BigInt], modulus: &BigInt) -> Option<(Vec<BigInt>, BigInt)> {
    let mut parts = Vec::with_capacity(residues.len());
    let mut common = BigInt::one();
    for r in residues {
        let (n, d) = rational_reconstruct(r, modulus)?;
        common = common.lcm(&d);
        parts.push((n, d));
    }
    let nums = parts
        .into_iter()
        .map(|(n, d)| n * (&common / d))
        .collect();
    Some((nums, common))
}
