//! Dense matrices generic over a commutative ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Commutative rings with identity, by value.
pub trait Ring:
    Clone + Zero + One + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}
impl<T> Ring for T where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Matrix { rows, cols, data }
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

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() && self.rows > 0 {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn scalar(n: usize, c: T) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { c.clone() } else { T::zero() })
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * rhs.get(k, j).clone())
        })
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + rhs.get(i, j).clone())
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - rhs.get(i, j).clone())
    }

    pub fn scale(&self, c: &T) -> Matrix<T> {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * v[k].clone()))
            .collect()
    }

    pub fn pow(&self, e: u32) -> Matrix<T> {
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Coefficients of `det(x·I − A)`, ascending, by Berkowitz's
    /// division-free algorithm. Works over any commutative ring.
    pub fn charpoly(&self) -> Vec<T> {
        let n = self.rows;
        assert!(self.is_square(), "charpoly of a non-square matrix");
        if n == 0 {
            return vec![T::one()];
        }
        // descending coefficients for the leading principal submatrices
        let mut q: Vec<T> = vec![T::one(), -self.get(0, 0).clone()];
        for r in 1..n {
            // column S = A[0..r][r], row R = A[r][0..r]
            let mut toeplitz = Vec::with_capacity(r + 2);
            toeplitz.push(T::one());
            toeplitz.push(-self.get(r, r).clone());
            let mut s: Vec<T> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let rs = (0..r).fold(T::zero(), |acc, k| acc + self.get(r, k).clone() * s[k].clone());
                toeplitz.push(-rs);
                s = (0..r)
                    .map(|i| (0..r).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * s[k].clone()))
                    .collect();
            }
            let next: Vec<T> = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r)).fold(T::zero(), |acc, j| acc + toeplitz[i - j].clone() * q[j].clone())
                })
                .collect();
            q = next;
        }
        q.reverse();
        q
    }

    pub fn determinant(&self) -> T {
        let cp = self.charpoly();
        if self.rows.is_multiple_of(2) {
            cp[0].clone()
        } else {
            -cp[0].clone()
        }
    }
}

impl Matrix<BigRational> {
    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<BigRational>> {
        let n = self.rows;
        if !self.is_square() {
            return None;
        }
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let pv = a.get(col, col).recip();
            for j in 0..n {
                let x = a.get(col, j) * &pv;
                a.set(col, j, x);
                let y = inv.get(col, j) * &pv;
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let x = a.get(r, j) - &factor * a.get(col, j);
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &factor * inv.get(col, j);
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }

    /// Maximum absolute row sum (the operator ∞-norm).
    pub fn row_sum_norm(&self) -> BigRational {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(BigRational::zero(), |acc, x| acc + x.abs()))
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(crate::field::rational_to_f64)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = (0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]).collect();
        f.debug_list().entries(rows).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn im(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn charpoly_small() {
        assert_eq!(im(&[&[2, 1], &[1, 1]]).charpoly(), ints(&[1, -3, 1]));
        assert_eq!(im(&[&[0, -1], &[1, 0]]).charpoly(), ints(&[1, 0, 1]));
        assert_eq!(im(&[&[5]]).charpoly(), ints(&[-5, 1]));
        // companion of T^3 - 2T^2 + 3T - 4
        let c = im(&[&[0, 0, 4], &[1, 0, -3], &[0, 1, 2]]);
        assert_eq!(c.charpoly(), ints(&[-4, 3, -2, 1]));
    }

    #[test]
    fn charpoly_matches_cayley_hamilton() {
        let a = im(&[&[1, 2, 0, -1], &[3, -1, 4, 2], &[0, 5, -2, 1], &[2, 0, 1, 3]]);
        let cp = a.charpoly();
        let mut acc = Matrix::<BigInt>::zeros(4, 4);
        for (k, c) in cp.iter().enumerate() {
            acc = acc.add(&a.pow(k as u32).scale(c));
        }
        assert_eq!(acc, Matrix::zeros(4, 4));
        assert_eq!(a.determinant(), cp[0].clone());
    }

    #[test]
    fn rational_inverse() {
        let a = im(&[&[2, 1], &[1, 1]]).map(|x| BigRational::from_integer(x.clone()));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let s = im(&[&[1, 2], &[2, 4]]).map(|x| BigRational::from_integer(x.clone()));
        assert!(s.inverse().is_none());
        assert_eq!(a.row_sum_norm(), BigRational::from_integer(3.into()));
    }
}
