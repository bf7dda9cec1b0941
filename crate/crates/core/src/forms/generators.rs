//! Deterministic generators for metabolic, canonical and diagonal forms.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{split_form, ConstantForm, HermitianForm, IsometryTriple, WittElement};
use crate::field_arith::{ntheory, CyclotomicNumber};
use crate::funcfield::{LaurentPoly, RationalFunction};
use crate::linalg::{self, Matrix, Scalar};
use crate::{Error, Result};

/// `[[0, X], [eps X^*, Y]]`; requires `Y` to be `eps`-hermitian and `X`
/// invertible.
pub fn metabolic_from(
    epsilon: i8,
    x: &Matrix<RationalFunction>,
    y: &Matrix<RationalFunction>,
) -> Result<HermitianForm> {
    let n = x.len();
    if n == 0 || y.len() != n || x.iter().chain(y.iter()).any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("X and Y must be square of the same size".into()));
    }
    let m = x[0][0].conductor();
    if linalg::det(x, &RationalFunction::one(m)).is_zero() {
        return Err(Error::Singular { summand: None });
    }
    let xs = linalg::conj_transpose(x);
    let mut gram = vec![vec![RationalFunction::zero(m); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            gram[i][n + j] = x[i][j].clone();
            gram[n + i][j] = xs[i][j].scaled_by_sign(epsilon);
            gram[n + i][n + j] = y[i][j].clone();
        }
    }
    let form = HermitianForm::new(m, epsilon, gram)?;
    form.validate_symmetry()?;
    Ok(form)
}

fn small_scalar(rng: &mut ChaCha8Rng, m: u64) -> CyclotomicNumber {
    let a = rng.gen_range(-3i64..=3);
    let mut x = CyclotomicNumber::from_integer(m, a);
    if m >= 3 && rng.gen_bool(0.5) {
        let b = rng.gen_range(-2i64..=2);
        let e = rng.gen_range(1..m as i64);
        x = &x + &CyclotomicNumber::zeta_power(m, e).scale_int(b);
    }
    if rng.gen_bool(0.25) {
        x = x.scale(&BigRational::new(1.into(), 2.into()));
    }
    x
}

/// Laurent polynomial supported on exponents `-1..=1`.
fn small_laurent(rng: &mut ChaCha8Rng, m: u64) -> RationalFunction {
    let mut p = LaurentPoly::zero(m);
    for e in -1..=1 {
        if rng.gen_bool(0.6) {
            p = p.add(&LaurentPoly::monomial(small_scalar(rng, m), e));
        }
    }
    RationalFunction::from_laurent(&p)
}

/// A random metabolic form of rank `2n` over `Q(zeta_m)(t)`, deterministic
/// in `seed`. `X` is redrawn until invertible.
pub fn make_metabolic(m: u64, n: usize, epsilon: i8, seed: u64) -> Result<HermitianForm> {
    if n == 0 {
        return Err(Error::InvalidArgument("metabolic forms need n >= 1".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("conductor must be positive".into()));
    }
    if epsilon != 1 && epsilon != -1 {
        return Err(Error::InvalidArgument(format!("epsilon must be +1 or -1, found {epsilon}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = RationalFunction::one(m);
    let x = loop {
        let x: Matrix<RationalFunction> = (0..n).map(|_| (0..n).map(|_| small_laurent(&mut rng, m)).collect()).collect();
        if !linalg::det(&x, &one).is_zero() {
            break x;
        }
    };
    let mut y = vec![vec![RationalFunction::zero(m); n]; n];
    for i in 0..n {
        let c = small_laurent(&mut rng, m);
        y[i][i] = c.plus(&c.bar().scaled_by_sign(epsilon));
        for j in i + 1..n {
            let c = small_laurent(&mut rng, m);
            y[j][i] = c.bar().scaled_by_sign(epsilon);
            y[i][j] = c;
        }
    }
    metabolic_from(epsilon, &x, &y)
}

/// A random nonsingular diagonal form over `Q(zeta_m)` with entries
/// `c + eps conj(c)`.
pub fn make_random_diagonal(m: u64, rank: usize, epsilon: i8, seed: u64) -> Result<ConstantForm> {
    if epsilon < 0 && m <= 2 {
        return Err(Error::InvalidArgument("Q has no nonzero skew elements".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(rank);
    while entries.len() < rank {
        let c = small_scalar(&mut rng, m);
        let d = if epsilon > 0 { &c + &c.conjugate() } else { &c - &c.conjugate() };
        if !d.is_zero() {
            entries.push(d);
        }
    }
    ConstantForm::diagonal(m, epsilon, &entries)
}

/// A block `r * [B_z]` of a canonical representative, `z = zeta_n^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalBlock {
    pub n: u64,
    pub j: u64,
    #[serde(with = "crate::rational::as_string")]
    pub r: BigRational,
}

/// `r0 [<1>] + sum_j r_j [B_{z_j}]` over `Q(zeta_L)(t)`,
/// `L = lcm(4, orders of the z_j)`, where `B_z` is the split form of the
/// skew line `(<i>, z)`:
/// `B_z(t) = i (1 - 1/t) / (1 - z) - i (1 - t) / (1 - conj(z))`.
pub fn make_canonical(r0: &BigRational, blocks: &[CanonicalBlock]) -> Result<WittElement> {
    let mut seen = Vec::new();
    let mut l = 4u64;
    for b in blocks {
        if b.n == 0 {
            return Err(Error::InvalidArgument("root of unity order must be positive".into()));
        }
        let order = ntheory::root_order(b.n, b.j);
        if order == 1 {
            return Err(Error::InvalidArgument("block at z = 1 is excluded".into()));
        }
        let key = (order, (b.j % b.n) * order / b.n);
        if seen.contains(&key) {
            return Err(Error::InvalidArgument(format!("duplicate block at zeta_{}^{}", b.n, b.j)));
        }
        seen.push(key);
        l = ntheory::lcm(l, order);
    }
    let mut w = WittElement::zero(l, 1);
    if !r0.is_zero() {
        w.push(
            HermitianForm::diagonal(l, 1, &[RationalFunction::one(l)])?,
            r0.clone(),
        )?;
    }
    let i = CyclotomicNumber::imaginary_unit(l)?;
    for b in blocks {
        if b.r.is_zero() {
            continue;
        }
        let z = CyclotomicNumber::zeta_power(l, ((l / b.n) * (b.j % b.n)) as i64);
        let triple = IsometryTriple::new(l, -1, vec![vec![i.clone()]], vec![vec![z]])?;
        w.push(split_form(&triple, 1)?, b.r.clone())?;
    }
    Ok(w)
}
