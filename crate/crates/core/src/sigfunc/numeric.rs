//! Signatures of hermitian interval matrices by pivoted `LDL^*`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::field_arith::{CertifiedInterval, RealBall};

/// Signature of the hermitian matrix enclosed by `a`, or `None` when no
/// pivot can be certified at this precision.
///
/// Pivots are `1x1` (a diagonal entry bounded away from zero) or `2x2`
/// (a principal block with certified negative determinant, which
/// contributes one positive and one negative square).
pub fn interval_signature(a: &[Vec<CertifiedInterval>]) -> Option<i64> {
    let mut a: Vec<Vec<CertifiedInterval>> = a.to_vec();
    let mut active: Vec<usize> = (0..a.len()).collect();
    let mut sig = 0i64;
    while !active.is_empty() {
        let (best, best_lower) = active
            .iter()
            .map(|&i| (i, a[i][i].re.abs_lower_units()))
            .max_by(|x, y| x.1.cmp(&y.1))?;
        let mut off: Option<(usize, usize, BigInt)> = None;
        for (x, &p) in active.iter().enumerate() {
            for &q in &active[x + 1..] {
                let w = a[p][q].abs_lower_units();
                if off.as_ref().is_none_or(|o| w > o.2) {
                    off = Some((p, q, w));
                }
            }
        }
        let prefer_single = !best_lower.is_zero()
            && off.as_ref().is_none_or(|o| &best_lower * 4u32 >= o.2);
        if prefer_single {
            sig += pivot_single(&mut a, &mut active, best)?;
            continue;
        }
        if let Some((p, q, _)) = off {
            if pivot_pair(&mut a, &mut active, p, q) {
                continue;
            }
        }
        if best_lower.is_zero() {
            return None;
        }
        sig += pivot_single(&mut a, &mut active, best)?;
    }
    Some(sig)
}

fn pivot_single(a: &mut [Vec<CertifiedInterval>], active: &mut Vec<usize>, k: usize) -> Option<i64> {
    let d = a[k][k].re.clone();
    let s = d.sign()?;
    let inv = CertifiedInterval::from_real(d).recip()?;
    active.retain(|&i| i != k);
    for &i in active.iter() {
        let left = a[i][k].mul(&inv);
        for &j in active.iter() {
            let v = a[i][j].sub(&left.mul(&a[k][j]));
            a[i][j] = v;
        }
    }
    Some(s as i64)
}

fn pivot_pair(a: &mut [Vec<CertifiedInterval>], active: &mut Vec<usize>, p: usize, q: usize) -> bool {
    let (app, aqq) = (a[p][p].re.clone(), a[q][q].re.clone());
    let b = a[p][q].clone();
    let norm: RealBall = b.re.mul(&b.re).add(&b.im.mul(&b.im));
    let det = app.mul(&aqq).sub(&norm);
    if det.sign() != Some(-1) {
        return false;
    }
    let inv_det = match CertifiedInterval::from_real(det).recip() {
        Some(x) => x,
        None => return false,
    };
    active.retain(|&i| i != p && i != q);
    let bc = a[q][p].clone();
    let (cpp, cqq) = (a[p][p].clone(), a[q][q].clone());
    for &i in active.iter() {
        let (aip, aiq) = (a[i][p].clone(), a[i][q].clone());
        // [a_ip a_iq] B^{-1}, with B^{-1} = [[a_qq, -a_pq], [-a_qp, a_pp]] / det
        let u = aip.mul(&cqq).sub(&aiq.mul(&bc)).mul(&inv_det);
        let w = aiq.mul(&cpp).sub(&aip.mul(&b)).mul(&inv_det);
        for &j in active.iter() {
            let v = a[i][j].sub(&u.mul(&a[p][j])).sub(&w.mul(&a[q][j]));
            a[i][j] = v;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn c(re: i64, im: i64) -> CertifiedInterval {
        let p = 64;
        CertifiedInterval {
            re: RealBall::from_rational(&BigRational::from_integer(re.into()), p),
            im: RealBall::from_rational(&BigRational::from_integer(im.into()), p),
        }
    }

    #[test]
    fn hyperbolic_plane_uses_pair_pivot() {
        let h = vec![vec![c(0, 0), c(1, 0)], vec![c(1, 0), c(0, 0)]];
        assert_eq!(interval_signature(&h), Some(0));
    }

    #[test]
    fn definite_and_indefinite() {
        let h = vec![vec![c(2, 0), c(0, 1)], vec![c(0, -1), c(2, 0)]];
        assert_eq!(interval_signature(&h), Some(2));
        let h = vec![vec![c(1, 0), c(0, 2)], vec![c(0, -2), c(1, 0)]];
        assert_eq!(interval_signature(&h), Some(0));
        let h = vec![vec![c(-3, 0), c(0, 0), c(1, 1)], vec![c(0, 0), c(0, 0), c(2, 0)], vec![c(1, -1), c(2, 0), c(0, 0)]];
        assert_eq!(interval_signature(&h), Some(-1));
    }

    #[test]
    fn undecidable_when_singular() {
        let h = vec![vec![c(1, 0), c(1, 0)], vec![c(1, 0), c(1, 0)]];
        assert_eq!(interval_signature(&h), None);
    }
}
