//! Small dense matrices over `f64`, exact rationals and double-double.
//!
//! Only what the structured moment matrices need: elimination, symmetric
//! factorisation, inversion and a fraction-free integer determinant.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::extended::{self, Wide};
use crate::scalar::rational_to_f64;

pub trait Field:
    Clone
    + PartialOrd
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn abs(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Field for Wide {
    fn zero() -> Self {
        Wide::from(0.0)
    }
    fn one() -> Self {
        Wide::from(1.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Wide::from(num as f64) / den as f64
    }
    fn abs(&self) -> Self {
        extended::abs(*self)
    }
    fn is_zero(&self) -> bool {
        self.hi() == 0.0
    }
    fn to_f64(&self) -> f64 {
        extended::narrow(*self)
    }
}

/// Row-major dense matrix with 0-based indexing.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Matrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[T]>::to_vec)
            .take(self.rows)
            .collect()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn submatrix(&self, n: usize) -> Self {
        Self::from_fn(n, n, |r, c| self.get(r, c).clone())
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(T::zero(), |acc, c| {
                    acc + self.get(r, c).clone() * x[c].clone()
                })
            })
            .collect()
    }

    pub fn mul_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows);
        Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).fold(T::zero(), |acc, j| {
                acc + self.get(r, j).clone() * rhs.get(j, c).clone()
            })
        })
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for k in 0..n {
            let p = match pivot_row(&a, k) {
                Some(p) => p,
                None => return T::zero(),
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a.get(k, k).clone();
            for r in k + 1..n {
                let factor = a.get(r, k).clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = a.get(r, c).clone() - factor.clone() * a.get(k, c).clone();
                    a.set(r, c, v);
                }
            }
            det = det * pivot;
        }
        det
    }

    /// Solves `A x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        assert!(self.is_square() && b.len() == self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.to_vec();
        for k in 0..n {
            let p = pivot_row(&a, k).ok_or(Error::Singular)?;
            if p != k {
                a.swap_rows(p, k);
                x.swap(p, k);
            }
            let pivot = a.get(k, k).clone();
            for r in k + 1..n {
                let factor = a.get(r, k).clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = a.get(r, c).clone() - factor.clone() * a.get(k, c).clone();
                    a.set(r, c, v);
                }
                x[r] = x[r].clone() - factor * x[k].clone();
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k].clone();
            for c in k + 1..n {
                acc = acc - a.get(k, c).clone() * x[c].clone();
            }
            x[k] = acc / a.get(k, k).clone();
        }
        Ok(x)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix<T>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<T>::identity(n);
        for k in 0..n {
            let p = pivot_row(&a, k).ok_or(Error::Singular)?;
            if p != k {
                a.swap_rows(p, k);
                inv.swap_rows(p, k);
            }
            let pivot = a.get(k, k).clone();
            for c in 0..n {
                a.set(k, c, a.get(k, c).clone() / pivot.clone());
                inv.set(k, c, inv.get(k, c).clone() / pivot.clone());
            }
            for r in 0..n {
                if r == k {
                    continue;
                }
                let factor = a.get(r, k).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = a.get(r, c).clone() - factor.clone() * a.get(k, c).clone();
                    a.set(r, c, v);
                    let w = inv.get(r, c).clone() - factor.clone() * inv.get(k, c).clone();
                    inv.set(r, c, w);
                }
            }
        }
        Ok(inv)
    }

    /// Determinants of the leading principal submatrices, orders `1..=n`.
    pub fn leading_minors(&self) -> Vec<T> {
        (1..=self.rows).map(|n| self.submatrix(n).det()).collect()
    }

    /// Symmetric `L D L^T` factorisation without pivoting. Fails with
    /// [`Error::Singular`] if a pivot is not strictly above `threshold`.
    pub fn ldlt(&self, threshold: &T) -> Result<Ldlt<T>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut l = Matrix::<T>::identity(n);
        let mut d: Vec<T> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = self.get(j, j).clone();
            for k in 0..j {
                let ljk = l.get(j, k).clone();
                dj = dj - ljk.clone() * ljk * d[k].clone();
            }
            if !(dj > *threshold) {
                return Err(Error::Singular);
            }
            for i in j + 1..n {
                let mut v = self.get(i, j).clone();
                for k in 0..j {
                    v = v - l.get(i, k).clone() * l.get(j, k).clone() * d[k].clone();
                }
                l.set(i, j, v / dj.clone());
            }
            d.push(dj);
        }
        Ok(Ldlt { l, d })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

fn pivot_row<T: Field>(a: &Matrix<T>, k: usize) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for r in k..a.rows {
        let v = a.get(r, k).abs();
        if v.is_zero() {
            continue;
        }
        match &best {
            Some((_, b)) if !(v > *b) => {}
            _ => best = Some((r, v)),
        }
    }
    best.map(|(r, _)| r)
}

#[derive(Clone, Debug)]
pub struct Ldlt<T> {
    pub l: Matrix<T>,
    pub d: Vec<T>,
}

impl<T: Field> Ldlt<T> {
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.d.len();
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] = y[i].clone() - self.l.get(i, k).clone() * y[k].clone();
            }
        }
        for i in 0..n {
            y[i] = y[i].clone() / self.d[i].clone();
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] = y[i].clone() - self.l.get(k, i).clone() * y[k].clone();
            }
        }
        y
    }

    pub fn pivot_min(&self) -> Option<&T> {
        self.d.iter().fold(None, |m: Option<&T>, v| match m {
            Some(x) if x <= v => Some(x),
            _ => Some(v),
        })
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled by the lcm of its denominators so the elimination
/// runs on integers; every intermediate division is exact.
pub fn det_bareiss(m: &Matrix<BigRational>) -> BigRational {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return <BigRational as One>::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|r| {
            let lcm = (0..n).fold(BigInt::one(), |acc, c| acc.lcm(m.get(r, c).denom()));
            scale *= &lcm;
            (0..n)
                .map(|c| {
                    let q = m.get(r, c);
                    q.numer() * (&lcm / q.denom())
                })
                .collect()
        })
        .collect();
    let det = bareiss_in_place(&mut a);
    BigRational::new(det, scale)
}

/// Bareiss elimination on an integer matrix; returns its determinant.
pub fn bareiss_in_place(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn hilbert(n: usize) -> Matrix<BigRational> {
        Matrix::from_fn(n, n, |r, c| rat(1, (r + c + 1) as i64))
    }

    #[test]
    fn hilbert_determinants() {
        // det H_n = c_n^4 / c_{2n} with c_n = prod_{i<n} i!
        assert_eq!(det_bareiss(&hilbert(3)), rat(1, 2160));
        assert_eq!(hilbert(3).det(), rat(1, 2160));
        assert_eq!(det_bareiss(&hilbert(4)), rat(1, 6048000));
    }

    #[test]
    fn bareiss_handles_zero_pivots() {
        let m = Matrix::from_rows(vec![
            vec![rat(0, 1), rat(1, 2), rat(0, 1)],
            vec![rat(1, 3), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(5, 1)],
        ]);
        assert_eq!(det_bareiss(&m), rat(-5, 6));
        assert_eq!(m.det(), rat(-5, 6));
    }

    #[test]
    fn inverse_and_solve_are_consistent() {
        let h = hilbert(5);
        let inv = h.inverse().unwrap();
        assert_eq!(h.mul_mat(&inv), Matrix::identity(5));
        let b: Vec<BigRational> = (0..5).map(|i| rat(i as i64 - 2, 1)).collect();
        let x = h.solve(&b).unwrap();
        assert_eq!(h.mul_vec(&x), b);
        assert_eq!(inv.mul_vec(&b), x);
    }

    #[test]
    fn ldlt_matches_elimination() {
        let h = hilbert(4);
        let f = h.ldlt(&rat(0, 1)).unwrap();
        let prod = f.d.iter().fold(rat(1, 1), |a, d| a * d);
        assert_eq!(prod, h.det());
        let b: Vec<BigRational> = vec![rat(1, 1), rat(0, 1), rat(-1, 1), rat(2, 3)];
        assert_eq!(f.solve(&b), h.solve(&b).unwrap());
    }

    #[test]
    fn ldlt_rejects_indefinite() {
        let m = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(matches!(m.ldlt(&0.0), Err(Error::Singular)));
    }

    #[test]
    fn singular_solve_is_an_error() {
        let m = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(m.solve(&[1.0, 1.0]).is_err());
        assert_eq!(m.det(), 0.0);
    }
}
