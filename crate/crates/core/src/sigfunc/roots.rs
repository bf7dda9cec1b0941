//! Unit-circle zeros of polynomials over `Q(zeta_m)`: exact recognition of
//! roots of unity, then certified angle bisection for the rest.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::field_arith::ball::roots_table;
use crate::field_arith::{cyclotomic_polynomial, exp_2pi_i, ntheory, CyclotomicNumber, Embedding};
use crate::funcfield::{NumericPoly, Poly};
use crate::{Error, Result, Settings};

/// Zeros of a polynomial on the unit circle.
#[derive(Clone, Debug, Default)]
pub(crate) struct CircleRoots {
    /// Roots of unity `zeta_n^j` in lowest terms.
    pub exact: Vec<(u64, u64)>,
    /// Closed angle intervals `[lo, hi]` in turns, `0 <= lo < 1`, covering
    /// every other zero on the circle.
    pub clusters: Vec<(BigRational, BigRational)>,
}

/// Live intervals allowed per unit of degree during bisection.
const WIDTH_BUDGET: usize = 512;

pub(crate) fn circle_roots(q: &Poly, settings: &Settings) -> Result<CircleRoots> {
    let mut out = CircleRoots::default();
    if q.is_zero() {
        return Err(Error::Singular { summand: None });
    }
    let q = q.shift_down(q.trailing_zeros());
    if q.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let rest = strip_roots_of_unity(&q, settings, &mut out.exact)?;
    if rest.degree().unwrap_or(0) > 0 {
        out.clusters = isolate(&squarefree(&rest)?, settings)?;
    }
    Ok(out)
}

fn cyclotomic_over(m: u64, d: u64) -> Poly {
    let coeffs = cyclotomic_polynomial(d)
        .into_iter()
        .map(|c| CyclotomicNumber::from_rational(m, &BigRational::from_integer(c)))
        .collect();
    Poly::new(m, coeffs)
}

fn hits_at(p: &Poly, d: u64, candidates: &[u64], prec: u32) -> Vec<u64> {
    let np = NumericPoly::new(p, &Embedding::identity(p.conductor()), prec);
    let table = roots_table(d, prec);
    candidates
        .iter()
        .copied()
        .filter(|&j| np.eval_root(&table, j).contains_zero())
        .collect()
}

/// Divides out every factor `t - zeta_d^j` with `d <= root_order_bound`,
/// recording the roots found.
fn strip_roots_of_unity(q: &Poly, settings: &Settings, exact: &mut Vec<(u64, u64)>) -> Result<Poly> {
    let m = q.conductor();
    let mut rest = q.clone();
    let p0 = settings.precision_start;
    for d in 1..=settings.root_order_bound {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let units = if d == 1 { vec![0] } else { ntheory::units(d) };
        let hits = hits_at(&rest, d, &units, p0);
        if hits.is_empty() {
            continue;
        }
        let phi = cyclotomic_over(m, d);
        let mut g = rest.gcd(&phi);
        let k = g.degree().unwrap_or(0);
        if k == 0 {
            continue;
        }
        let mut found = hits;
        let mut precs = settings.precisions().skip(1);
        while found.len() > k {
            let prec = precs.next().ok_or_else(|| Error::RefinementBudget {
                what: format!("separating roots of unity of order {d} in {}", q),
            })?;
            found = hits_at(&g, d, &found, prec);
        }
        if found.len() != k {
            return Err(Error::Consistency(format!(
                "{} roots of order {d} expected, {} found",
                k,
                found.len()
            )));
        }
        exact.extend(found.into_iter().map(|j| (d, j)));
        loop {
            rest = rest.exact_div(&g)?;
            let h = rest.gcd(&g);
            if h.degree().unwrap_or(0) == 0 {
                break;
            }
            g = h;
        }
    }
    Ok(rest)
}

/// `q / gcd(q, q')`: the same zeros, all simple.
fn squarefree(q: &Poly) -> Result<Poly> {
    let g = q.gcd(&q.derivative());
    if g.degree().unwrap_or(0) == 0 {
        return Ok(q.clone());
    }
    q.exact_div(&g)
}

/// Certified bisection in angle. With `g(x) = q(exp(2 pi i x))`, an interval
/// of half-width `h` turns around `c` is discarded when
/// `|g(c)| > h |g'(c)| + h^2 sup |g''| / 2`; the Taylor remainder then keeps
/// `g` away from zero on the whole interval.
fn isolate(q: &Poly, settings: &Settings) -> Result<Vec<(BigRational, BigRational)>> {
    let deg = q.degree().unwrap_or(0);
    let depth = settings.isolation_bits.max(5);
    let rho = Embedding::identity(q.conductor());
    let probe = NumericPoly::new(q, &rho, settings.precision_start);
    let biggest = probe
        .coeffs
        .iter()
        .map(|c| c.abs_upper_units())
        .max()
        .unwrap_or_else(BigInt::zero);
    let magnitude = biggest.bits() as i64 - settings.precision_start as i64;
    let prec = (2 * depth as i64 + 48 + (-magnitude).max(0)) as u32;
    let np = NumericPoly::new(q, &rho, prec);
    let dp = NumericPoly::new(&q.derivative(), &rho, prec);
    // |g'| = 2 pi |q'| <= 7 |q'|, |g''| <= 4 pi^2 sum k^2 |a_k| <= 40 sum k^2 |a_k|
    let curvature: BigInt = np
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs_upper_units() * (k * k))
        .sum::<BigInt>()
        * 20u32;

    let mut live: Vec<u64> = (0..16).collect();
    let mut level = 4u32;
    loop {
        let mut next = Vec::new();
        for &a in &live {
            let c = BigRational::new((2 * a + 1).into(), BigInt::from(1u64) << (level + 1));
            let z = exp_2pi_i(&c, prec);
            let v = np.eval(&z).abs_lower_units();
            let slope = dp.eval(&z).abs_upper_units() * 7u32;
            // scaled by 1 / h^2 = 4^(level + 1)
            let s = level + 1;
            if (v << (2 * s)) > (slope << s) + &curvature {
                continue;
            }
            if level == depth {
                next.push(a);
            } else {
                next.push(2 * a);
                next.push(2 * a + 1);
            }
        }
        if next.len() > WIDTH_BUDGET * deg.max(1) {
            return Err(Error::RefinementBudget {
                what: format!("isolating the unit-circle zeros of {q}"),
            });
        }
        live = next;
        if level == depth {
            break;
        }
        level += 1;
    }
    Ok(runs(&live, depth))
}

/// Groups adjacent dyadic cells `[a, a + 1] / 2^depth` into closed
/// intervals, joining across angle 0.
fn runs(cells: &[u64], depth: u32) -> Vec<(BigRational, BigRational)> {
    let full = 1u64 << depth;
    let mut spans: Vec<(u64, u64)> = Vec::new();
    for &a in cells {
        match spans.last_mut() {
            Some(last) if last.1 == a => last.1 = a + 1,
            _ => spans.push((a, a + 1)),
        }
    }
    if spans.len() > 1 && spans[0].0 == 0 && spans.last().unwrap().1 == full {
        let first = spans.remove(0);
        spans.last_mut().unwrap().1 = full + first.1;
    }
    let den = BigInt::from(full);
    spans
        .into_iter()
        .map(|(a, b)| {
            (
                BigRational::new(a.into(), den.clone()),
                BigRational::new(b.into(), den.clone()),
            )
        })
        .collect()
}

/// `floor(x)` for a nonnegative rational, as `u64`.
pub(crate) fn floor_u64(x: &BigRational) -> u64 {
    x.floor().to_integer().to_u64().unwrap_or(0)
}
