//! Signature step functions `z -> sign(rho(tau)(z))` on the unit circle.
//!
//! Jumps can only occur at unit-circle zeros of a summand's determinant
//! numerator or at poles of its entries. Those points are located (exactly
//! for roots of unity of bounded order, by certified angle intervals
//! otherwise), each open arc between them is sampled at a root of unity,
//! and the signature there is computed by interval `LDL^*` with an exact
//! fallback.

mod numeric;
mod roots;

use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::field_arith::{exp_2pi_i, ntheory, CertifiedInterval, Embedding};
use crate::forms::{signature_constant_with, ConstantForm, HermitianForm, WittElement};
use crate::funcfield::{Poly, RationalFunction};
use crate::linalg;
use crate::rational::format_rational;
use crate::{Error, Result, Settings};

pub use numeric::interval_signature;

/// A point, or a small closed arc, of the unit circle. Angles are in turns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CirclePoint {
    /// `t = zeta_n^j`, with `gcd(j, n) = 1` (and `n = 1, j = 0` for `t = 1`).
    Exact { n: u64, j: u64 },
    /// The arc of angles `[lo, hi]`, `0 <= lo < 1`, `lo < hi < lo + 1`;
    /// `summand` is the summand whose polynomial produced it.
    Isolated {
        lo: BigRational,
        hi: BigRational,
        summand: usize,
    },
}

impl CirclePoint {
    /// `zeta_n^j` in lowest terms.
    pub fn exact(n: u64, j: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("root of unity order must be positive".into()));
        }
        let j = j.rem_euclid(n as i64) as u64;
        let g = j.gcd(&n);
        Ok(CirclePoint::Exact { n: n / g, j: j / g })
    }

    fn turns(n: u64, j: u64) -> BigRational {
        BigRational::new(j.into(), n.into())
    }

    pub fn angle_lo(&self) -> BigRational {
        match self {
            CirclePoint::Exact { n, j } => Self::turns(*n, *j),
            CirclePoint::Isolated { lo, .. } => lo.clone(),
        }
    }

    /// Upper angle; may exceed 1 when the arc crosses angle 0.
    pub fn angle_hi(&self) -> BigRational {
        match self {
            CirclePoint::Exact { n, j } => Self::turns(*n, *j),
            CirclePoint::Isolated { hi, .. } => hi.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CirclePoint::Exact { .. })
    }

    /// Whether the angle (taken mod 1) lies in the closed arc.
    pub fn contains(&self, angle: &BigRational) -> bool {
        let a = angle - angle.floor();
        let (lo, hi) = (self.angle_lo(), self.angle_hi());
        (lo <= a && a <= hi) || (hi > BigRational::one() && a + BigRational::one() <= hi)
    }
}

impl std::fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CirclePoint::Exact { n, j } => write!(f, "zeta_{n}^{j}"),
            CirclePoint::Isolated { lo, hi, .. } => {
                write!(f, "[{}, {}] turns", format_rational(lo), format_rational(hi))
            }
        }
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CirclePoint::Exact { n, j } => {
                let mut st = s.serialize_struct("CirclePoint", 3)?;
                st.serialize_field("type", "exact")?;
                st.serialize_field("N", n)?;
                st.serialize_field("j", j)?;
                st.end()
            }
            CirclePoint::Isolated { lo, hi, summand } => {
                let mut st = s.serialize_struct("CirclePoint", 4)?;
                st.serialize_field("type", "isolated")?;
                st.serialize_field("angle_lo", &format_rational(lo))?;
                st.serialize_field("angle_hi", &format_rational(hi))?;
                st.serialize_field("summand", summand)?;
                st.end()
            }
        }
    }
}

/// A locally constant function on the circle minus finitely many points.
///
/// `arc_values[i]` is the value on the open arc following `candidates[i]`
/// (counterclockwise), and `samples[i]` is a root of unity inside that arc.
/// Without candidates there is a single arc, the whole circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureStepFunction {
    embedding: Embedding,
    candidates: Vec<CirclePoint>,
    samples: Vec<CirclePoint>,
    arc_values: Vec<BigRational>,
}

impl SignatureStepFunction {
    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    pub fn candidates(&self) -> &[CirclePoint] {
        &self.candidates
    }

    pub fn samples(&self) -> &[CirclePoint] {
        &self.samples
    }

    pub fn arc_values(&self) -> &[BigRational] {
        &self.arc_values
    }

    /// `arc_values[i] - arc_values[i - 1]` (cyclically), one per candidate.
    pub fn jump_values(&self) -> Vec<BigRational> {
        let k = self.candidates.len();
        (0..k)
            .map(|i| &self.arc_values[i] - &self.arc_values[(i + k - 1) % k])
            .collect()
    }

    /// Candidates with nonzero jump.
    pub fn jumps(&self) -> Vec<(CirclePoint, BigRational)> {
        self.candidates
            .iter()
            .cloned()
            .zip(self.jump_values())
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.arc_values.iter().all(Zero::is_zero)
    }

    /// The same function with zero-jump candidates removed and the arcs on
    /// either side joined.
    pub fn merged(&self) -> Self {
        let jumps = self.jump_values();
        let keep: Vec<usize> = (0..jumps.len()).filter(|&i| !jumps[i].is_zero()).collect();
        if keep.is_empty() {
            return SignatureStepFunction {
                embedding: self.embedding,
                candidates: Vec::new(),
                samples: vec![self.samples[0].clone()],
                arc_values: vec![self.arc_values[0].clone()],
            };
        }
        SignatureStepFunction {
            embedding: self.embedding,
            candidates: keep.iter().map(|&i| self.candidates[i].clone()).collect(),
            samples: keep.iter().map(|&i| self.samples[i].clone()).collect(),
            arc_values: keep.iter().map(|&i| self.arc_values[i].clone()).collect(),
        }
    }

    /// Index of the open arc containing the angle, or `None` when the angle
    /// lies in a candidate.
    pub fn arc_index(&self, angle: &BigRational) -> Option<usize> {
        if self.candidates.iter().any(|c| c.contains(angle)) {
            return None;
        }
        let k = self.candidates.len();
        if k <= 1 {
            return Some(0);
        }
        let a = angle - angle.floor();
        let one = BigRational::one();
        (0..k).find(|&i| {
            let (start, end) = arc_bounds(&self.candidates, i);
            [a.clone(), &a + &one].iter().any(|x| start < *x && *x < end)
        })
    }

    /// Value at an angle off the candidate set.
    pub fn value_at(&self, angle: &BigRational) -> Option<BigRational> {
        self.arc_index(angle).map(|i| self.arc_values[i].clone())
    }

    /// One row per arc: `angle_turns_lo,angle_turns_hi,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("angle_turns_lo,angle_turns_hi,value\n");
        for (lo, hi, v) in self.arcs() {
            let _ = writeln!(out, "{},{},{}", format_rational(&lo), format_rational(&hi), format_rational(v));
        }
        out
    }

    /// Arcs as `(start, end, value)` in turns, `0 <= start < 1`, `start < end`.
    pub fn arcs(&self) -> Vec<(BigRational, BigRational, &BigRational)> {
        let k = self.candidates.len();
        if k == 0 {
            return vec![(BigRational::zero(), BigRational::one(), &self.arc_values[0])];
        }
        (0..k)
            .map(|i| {
                let (start, end) = arc_bounds(&self.candidates, i);
                let shift = start.floor();
                (&start - &shift, &end - &shift, &self.arc_values[i])
            })
            .collect()
    }
}

impl Serialize for SignatureStepFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SignatureStepFunction", 6)?;
        st.serialize_field("m", &self.embedding.conductor())?;
        st.serialize_field("embedding_k", &self.embedding.exponent())?;
        st.serialize_field("candidates", &self.candidates)?;
        st.serialize_field("samples", &self.samples)?;
        let fmt = |v: &[BigRational]| v.iter().map(format_rational).collect::<Vec<_>>();
        st.serialize_field("arc_values", &fmt(&self.arc_values))?;
        st.serialize_field("jumps", &fmt(&self.jump_values()))?;
        st.end()
    }
}

/// Start and end angles of the arc after candidate `i`, with `start < end`.
fn arc_bounds(cands: &[CirclePoint], i: usize) -> (BigRational, BigRational) {
    let start = cands[i].angle_hi();
    let mut end = if i + 1 < cands.len() {
        cands[i + 1].angle_lo()
    } else {
        cands[0].angle_lo() + BigRational::one()
    };
    while end <= start {
        end += BigRational::one();
    }
    (start, end)
}

fn check_embedding(w: &WittElement, rho: &Embedding) -> Result<()> {
    if rho.conductor() != w.conductor() {
        return Err(Error::ConductorMismatch {
            left: w.conductor(),
            right: rho.conductor(),
        });
    }
    Ok(())
}

/// Polynomials (already twisted by `rho`) whose unit-circle zeros contain
/// every jump of summand `i`: the determinant numerator and the entry
/// denominators.
fn summand_polynomials(form: &HermitianForm, index: usize, rho: &Embedding) -> Result<Vec<Poly>> {
    let m = form.conductor();
    let det = linalg::det(form.gram(), &RationalFunction::one(m));
    if det.is_zero() {
        return Err(Error::Singular { summand: Some(index) });
    }
    let k = rho.exponent();
    let mut polys = vec![det.numerator_poly().apply_galois(k)];
    for x in form.gram().iter().flatten() {
        if x.denominator_poly().degree().unwrap_or(0) > 0 {
            polys.push(x.denominator_poly().apply_galois(k));
        }
    }
    Ok(polys)
}

/// Sorts points by angle and joins overlapping ones. A root of unity lying
/// inside an isolating arc is absorbed by the arc.
fn merge_points(mut pts: Vec<CirclePoint>) -> Result<Vec<CirclePoint>> {
    pts.sort_by(|a, b| {
        a.angle_lo()
            .cmp(&b.angle_lo())
            .then_with(|| a.angle_hi().cmp(&b.angle_hi()))
    });
    pts.dedup();
    let join = |a: &CirclePoint, b: &CirclePoint, shift: &BigRational| -> CirclePoint {
        if a == b {
            return a.clone();
        }
        let summand = match (a, b) {
            (CirclePoint::Isolated { summand, .. }, _) | (_, CirclePoint::Isolated { summand, .. }) => *summand,
            _ => 0,
        };
        let lo = a.angle_lo().min(b.angle_lo() + shift);
        let hi = a.angle_hi().max(b.angle_hi() + shift);
        CirclePoint::Isolated { lo, hi, summand }
    };
    let zero = BigRational::zero();
    let mut out: Vec<CirclePoint> = Vec::new();
    for p in pts {
        if let Some(last) = out.last_mut() {
            if p.angle_lo() <= last.angle_hi() {
                *last = join(last, &p, &zero);
                continue;
            }
        }
        out.push(p);
    }
    let one = BigRational::one();
    while out.len() > 1 {
        let wrap = out.last().unwrap().angle_hi() - &one;
        if out[0].angle_lo() > wrap {
            break;
        }
        let first = out.remove(0);
        let last = out.last_mut().unwrap();
        *last = join(last, &first, &one);
    }
    if out.iter().any(|p| p.angle_hi() - p.angle_lo() >= one) {
        return Err(Error::RefinementBudget {
            what: "separating jump candidates (they cover the whole circle)".into(),
        });
    }
    Ok(out)
}

/// Every point where the step function of `w` under `rho` may jump.
pub fn jump_candidates(w: &WittElement, rho: &Embedding) -> Result<Vec<CirclePoint>> {
    jump_candidates_with(w, rho, &Settings::default())
}

pub fn jump_candidates_with(w: &WittElement, rho: &Embedding, settings: &Settings) -> Result<Vec<CirclePoint>> {
    check_embedding(w, rho)?;
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    for (index, s) in w.summands().iter().enumerate() {
        for p in summand_polynomials(&s.form, index, rho)? {
            if !seen.insert(p.clone()) {
                continue;
            }
            let found = roots::circle_roots(&p, settings).map_err(|e| match e {
                Error::Singular { .. } => Error::Singular { summand: Some(index) },
                e => e,
            })?;
            for (n, j) in found.exact {
                points.push(CirclePoint::exact(n, j as i64)?);
            }
            for (lo, hi) in found.clusters {
                points.push(CirclePoint::Isolated { lo, hi, summand: index });
            }
        }
    }
    merge_points(points)
}

/// The smallest `zeta_N^j`, `N = 8, 16, ...`, strictly inside `(start, end)`.
fn pick_sample(start: &BigRational, end: &BigRational) -> Result<CirclePoint> {
    let mut n: u64 = 8;
    loop {
        let nn = BigRational::from_integer(n.into());
        let j = roots::floor_u64(&(start * &nn)) + 1;
        if BigRational::new(j.into(), n.into()) < *end {
            return CirclePoint::exact(n, (j % n) as i64);
        }
        n = n.checked_mul(2).filter(|&x| x <= 1 << 62).ok_or_else(|| Error::RefinementBudget {
            what: "choosing a sample point inside an arc".into(),
        })?;
    }
}

/// Gram matrix of `rho(form)` at `t = exp(2 pi i angle)`, multiplied by `i`
/// when `epsilon = -1`.
fn numeric_gram(form: &HermitianForm, rho: &Embedding, z: &CertifiedInterval, prec: u32) -> Result<Vec<Vec<CertifiedInterval>>> {
    let g = form.gram();
    let n = g.len();
    let mut out = vec![vec![CertifiedInterval::zero(prec); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut v = g[i][j].eval_numeric(rho, z, prec)?;
            if form.epsilon() < 0 {
                v = v.mul_i();
            }
            out[j][i] = v.conj();
            out[i][j] = v;
        }
    }
    Ok(out)
}

fn numeric_summand_signature(form: &HermitianForm, rho: &Embedding, n: u64, j: u64, prec: u32) -> Option<i64> {
    let z = exp_2pi_i(&BigRational::new(j.into(), n.into()), prec);
    let a = numeric_gram(form, rho, &z, prec).ok()?;
    interval_signature(&a)
}

/// Exact signature of `rho(form)` at `zeta_n^j`, computed in
/// `Q(zeta_lcm(m, n))`.
fn exact_summand_signature(form: &HermitianForm, index: usize, rho: &Embedding, n: u64, j: u64, settings: &Settings) -> Result<i64> {
    let l = ntheory::lcm(form.conductor(), n);
    let gram = form
        .gram()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    x.eval_under(rho, n, j as i64).map_err(|e| match e {
                        Error::Pole { n, j } => Error::SummandPole { summand: index, n, j },
                        e => e,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let c = ConstantForm::new(l, form.epsilon(), gram)?;
    signature_constant_with(&c, &Embedding::identity(l), settings).map_err(|e| match e {
        Error::Singular { .. } => Error::Singular { summand: Some(index) },
        e => e,
    })
}

fn summand_signature(form: &HermitianForm, index: usize, rho: &Embedding, n: u64, j: u64, settings: &Settings) -> Result<i64> {
    for prec in settings.precisions().take(3) {
        if let Some(s) = numeric_summand_signature(form, rho, n, j, prec) {
            return Ok(s);
        }
    }
    exact_summand_signature(form, index, rho, n, j, settings)
}

fn class_value(w: &WittElement, rho: &Embedding, n: u64, j: u64, settings: &Settings) -> Result<BigRational> {
    let mut v = BigRational::zero();
    for (index, s) in w.summands().iter().enumerate() {
        let sig = summand_signature(&s.form, index, rho, n, j, settings)?;
        v += &s.coeff * BigRational::from_integer(sig.into());
    }
    Ok(v)
}

/// The signature step function of `w` under `rho`.
pub fn signature_step_function(w: &WittElement, rho: &Embedding) -> Result<SignatureStepFunction> {
    signature_step_function_with(w, rho, &Settings::default(), &[])
}

/// As [`signature_step_function`], with explicit settings and extra
/// candidate points added to the computed ones.
pub fn signature_step_function_with(
    w: &WittElement,
    rho: &Embedding,
    settings: &Settings,
    extra: &[CirclePoint],
) -> Result<SignatureStepFunction> {
    w.validate()?;
    let mut candidates = jump_candidates_with(w, rho, settings)?;
    if !extra.is_empty() {
        candidates.extend(extra.iter().cloned());
        candidates = merge_points(candidates)?;
    }
    let samples = if candidates.is_empty() {
        vec![CirclePoint::Exact { n: 1, j: 0 }]
    } else {
        (0..candidates.len())
            .map(|i| {
                let (start, end) = arc_bounds(&candidates, i);
                pick_sample(&start, &end)
            })
            .collect::<Result<Vec<_>>>()?
    };
    let arc_values = samples
        .iter()
        .map(|p| match p {
            CirclePoint::Exact { n, j } => class_value(w, rho, *n, *j, settings),
            CirclePoint::Isolated { .. } => unreachable!("samples are exact"),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SignatureStepFunction {
        embedding: *rho,
        candidates,
        samples,
        arc_values,
    })
}

/// `sum_i r_i sign(rho(A_i)(z))` at a root of unity, computed exactly.
pub fn evaluate_class_at(w: &WittElement, rho: &Embedding, z: &CirclePoint) -> Result<BigRational> {
    evaluate_class_at_with(w, rho, z, &Settings::default())
}

pub fn evaluate_class_at_with(w: &WittElement, rho: &Embedding, z: &CirclePoint, settings: &Settings) -> Result<BigRational> {
    check_embedding(w, rho)?;
    let (n, j) = match z {
        CirclePoint::Exact { n, j } => (*n, *j),
        CirclePoint::Isolated { .. } => {
            return Err(Error::InvalidArgument("evaluation needs an exact root of unity".into()))
        }
    };
    let mut v = BigRational::zero();
    for (index, s) in w.summands().iter().enumerate() {
        let sig = exact_summand_signature(&s.form, index, rho, n, j, settings)?;
        v += &s.coeff * BigRational::from_integer(sig.into());
    }
    Ok(v)
}

/// The same sum from interval arithmetic at a fixed precision; `None` when
/// some pivot is not sign-decisive.
pub fn numeric_class_at(w: &WittElement, rho: &Embedding, z: &CirclePoint, precision: u32) -> Result<Option<BigRational>> {
    check_embedding(w, rho)?;
    let (n, j) = match z {
        CirclePoint::Exact { n, j } => (*n, *j),
        CirclePoint::Isolated { .. } => {
            return Err(Error::InvalidArgument("evaluation needs an exact root of unity".into()))
        }
    };
    let mut v = BigRational::zero();
    for s in w.summands() {
        match numeric_summand_signature(&s.form, rho, n, j, precision) {
            Some(sig) => v += &s.coeff * BigRational::from_integer(sig.into()),
            None => return Ok(None),
        }
    }
    Ok(Some(v))
}

/// Midpoint of a candidate in turns, for display.
pub fn midpoint_turns(p: &CirclePoint) -> f64 {
    let mid = (p.angle_lo() + p.angle_hi()) / BigRational::from_integer(BigInt::from(2));
    let x = mid.to_f64().unwrap_or(0.0);
    if x.is_sign_negative() {
        x + 1.0
    } else {
        x % 1.0
    }
}

#[cfg(test)]
mod tests;
