//! Dense linear algebra over fields with an involution.
//!
//! Matrices are row-major `Vec<Vec<T>>`. Sesquilinear forms use the
//! convention `theta(x, y) = x^* A y`, so a change of basis acts by
//! congruence `A -> P A P^*` when `P` transforms rows.

use std::fmt;

use crate::field_arith::CyclotomicNumber;
use crate::{Error, Result};

/// A field with an involution `conj`.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn negated(&self) -> Self;
    fn conj(&self) -> Self;
    /// A nonzero element `s` with `conj(s) = -s`, when one exists.
    fn skew_unit_like(&self) -> Option<Self>;

    fn divided(&self, o: &Self) -> Result<Self> {
        Ok(self.times(&o.inverse()?))
    }

    fn scaled_by_sign(&self, eps: i8) -> Self {
        if eps < 0 {
            self.negated()
        } else {
            self.clone()
        }
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

impl Scalar for CyclotomicNumber {
    fn zero_like(&self) -> Self {
        CyclotomicNumber::zero(self.conductor())
    }
    fn one_like(&self) -> Self {
        CyclotomicNumber::one(self.conductor())
    }
    fn is_zero(&self) -> bool {
        CyclotomicNumber::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        self.conjugate()
    }
    fn skew_unit_like(&self) -> Option<Self> {
        CyclotomicNumber::skew_unit(self.conductor())
    }
}

pub fn conj_transpose<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].conj()).collect())
        .collect()
}

pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = row[0].zero_like();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.plus(&row[k].times(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn identity_like<T: Scalar>(n: usize, sample: &T) -> Matrix<T> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { sample.one_like() } else { sample.zero_like() })
                .collect()
        })
        .collect()
}

pub fn mat_sub<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.minus(y)).collect())
        .collect()
}

pub fn mat_add<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.plus(y)).collect())
        .collect()
}

pub fn mat_scale<T: Scalar>(a: &Matrix<T>, c: &T) -> Matrix<T> {
    a.iter()
        .map(|r| r.iter().map(|x| c.times(x)).collect())
        .collect()
}

/// Determinant by Gaussian elimination; `unit` supplies the field for the
/// empty matrix.
pub fn det<T: Scalar>(a: &Matrix<T>, unit: &T) -> T {
    let n = a.len();
    let mut m = a.clone();
    let mut acc = unit.one_like();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return unit.zero_like();
        };
        if p != k {
            m.swap(p, k);
            acc = acc.negated();
        }
        let inv = m[k][k].inverse().expect("nonzero pivot");
        acc = acc.times(&m[k][k]);
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].times(&inv);
            for j in k..n {
                if !m[k][j].is_zero() {
                    let v = m[i][j].minus(&f.times(&m[k][j]));
                    m[i][j] = v;
                }
            }
        }
    }
    acc
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref<T: Scalar>(m: &mut Matrix<T>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for j in c..cols {
            m[r][j] = m[r][j].times(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                if !m[r][j].is_zero() {
                    let v = m[i][j].minus(&f.times(&m[r][j]));
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(a: &Matrix<T>) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Basis of the right kernel `{x : A x = 0}`, as column vectors.
pub fn kernel<T: Scalar>(a: &Matrix<T>) -> Vec<Vec<T>> {
    let cols = a.first().map_or(0, Vec::len);
    if cols == 0 {
        return Vec::new();
    }
    let sample = a[0][0].clone();
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![sample.zero_like(); cols];
        v[free] = sample.one_like();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m[r][free].negated();
        }
        basis.push(v);
    }
    basis
}

pub fn inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let sample = a[0][0].clone();
    let mut m: Matrix<T> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { sample.one_like() } else { sample.zero_like() }));
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular { summand: None });
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Result of an epsilon-hermitian congruence diagonalization:
/// `transform * A * transform^* = diag(diagonal)`.
#[derive(Clone, Debug)]
pub struct Diagonalization<T> {
    pub diagonal: Vec<T>,
    pub transform: Matrix<T>,
}

/// Congruence diagonalization of an epsilon-hermitian matrix.
///
/// Pivots on the first nonzero diagonal entry. When the remaining diagonal
/// vanishes, `v_k + v_j` is used, and `v_k + s v_j` for a skew unit `s`
/// when the first combination is isotropic. Every diagonal entry `d`
/// satisfies `conj(d) = eps * d`.
pub fn diagonalize<T: Scalar>(a: &Matrix<T>) -> Result<Diagonalization<T>> {
    let n = a.len();
    if n == 0 {
        return Ok(Diagonalization {
            diagonal: Vec::new(),
            transform: Vec::new(),
        });
    }
    let sample = a[0][0].clone();
    let mut m = a.clone();
    let mut p = identity_like(n, &sample);
    let mut diagonal = Vec::with_capacity(n);
    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| !m[i][i].is_zero()) {
            swap_sym(&mut m, &mut p, i, k);
        } else if let Some((i, j)) = first_offdiag(&m, k) {
            swap_sym(&mut m, &mut p, i, k);
            let j = if j == k { i } else { j };
            // A[k][k] + c A[k][j] + conj(c) A[j][k] + |c|^2 A[j][j], A[j][j] = 0
            let akj = m[k][j].clone();
            let ajk = m[j][k].clone();
            let one = sample.one_like();
            let trial = akj.plus(&ajk);
            let c = if !trial.is_zero() {
                one
            } else {
                sample
                    .skew_unit_like()
                    .ok_or_else(|| Error::Consistency("no skew unit available for pivoting".into()))?
            };
            add_multiple_sym(&mut m, &mut p, k, j, &c);
            if m[k][k].is_zero() {
                return Err(Error::Consistency("pivot combination stayed isotropic".into()));
            }
        } else {
            for _ in k..n {
                diagonal.push(sample.zero_like());
            }
            return Ok(Diagonalization {
                diagonal,
                transform: p,
            });
        }
        let piv = m[k][k].clone();
        let inv = piv.inverse()?;
        for j in k + 1..n {
            if m[j][k].is_zero() {
                continue;
            }
            let f = m[j][k].times(&inv).negated();
            add_multiple_sym(&mut m, &mut p, j, k, &f);
        }
        diagonal.push(piv);
    }
    Ok(Diagonalization {
        diagonal,
        transform: p,
    })
}

fn first_offdiag<T: Scalar>(m: &Matrix<T>, k: usize) -> Option<(usize, usize)> {
    let n = m.len();
    for i in k..n {
        for j in k..n {
            if i != j && !m[i][j].is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

fn swap_sym<T: Scalar>(m: &mut Matrix<T>, p: &mut Matrix<T>, i: usize, k: usize) {
    if i == k {
        return;
    }
    m.swap(i, k);
    for row in m.iter_mut() {
        row.swap(i, k);
    }
    p.swap(i, k);
}

/// `v_dst <- v_dst + c v_src` on rows, and the conjugate on columns.
fn add_multiple_sym<T: Scalar>(m: &mut Matrix<T>, p: &mut Matrix<T>, dst: usize, src: usize, c: &T) {
    let n = m.len();
    let cc = c.conj();
    for j in 0..n {
        if !m[src][j].is_zero() {
            let v = m[dst][j].plus(&c.times(&m[src][j]));
            m[dst][j] = v;
        }
        if !p[src][j].is_zero() {
            let v = p[dst][j].plus(&c.times(&p[src][j]));
            p[dst][j] = v;
        }
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let v = row[dst].plus(&row[src].times(&cc));
            row[dst] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_arith::CyclotomicNumber as C;

    fn c(m: u64, v: i64) -> C {
        C::from_integer(m, v)
    }

    #[test]
    fn hyperbolic_plane_pivot() {
        let a = vec![vec![c(1, 0), c(1, 1)], vec![c(1, 1), c(1, 0)]];
        let d = diagonalize(&a).unwrap();
        let q = |p, q| C::from_rational(1, &crate::rational::rat(p, q));
        assert_eq!(d.diagonal, vec![q(2, 1), q(-1, 2)]);
        let back = mat_mul(&mat_mul(&d.transform, &a), &conj_transpose(&d.transform));
        assert_eq!(back, vec![vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(-1, 2)]]);
    }

    #[test]
    fn skew_pivot_over_gaussian_integers() {
        let i = C::imaginary_unit(4).unwrap();
        let a = vec![vec![c(4, 0), i.clone()], vec![-&i, c(4, 0)]];
        let d = diagonalize(&a).unwrap();
        assert!(d.diagonal.iter().all(|x| x.conjugate() == *x && !x.is_zero()));
        let back = mat_mul(&mat_mul(&d.transform, &a), &conj_transpose(&d.transform));
        assert!(back[0][1].is_zero() && back[1][0].is_zero());
    }

    #[test]
    fn kernel_and_inverse() {
        let a = vec![vec![c(1, 1), c(1, 2)], vec![c(1, 2), c(1, 4)]];
        let k = kernel(&a);
        assert_eq!(k, vec![vec![c(1, -2), c(1, 1)]]);
        assert!(inverse(&a).is_err());
        assert!(det(&a, &c(1, 1)).is_zero());
        let b = vec![vec![c(1, 2), c(1, 1)], vec![c(1, 1), c(1, 1)]];
        let bi = inverse(&b).unwrap();
        assert_eq!(mat_mul(&b, &bi), identity_like(2, &c(1, 1)));
        assert_eq!(det(&b, &c(1, 1)), c(1, 1));
    }
}
