//! Euclidean domains and Smith normal form with transforms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::Rationals;
use crate::laurent::LaurentPoly;
use crate::matrix::{Matrix, Ring};
use crate::poly::PolyRing;

pub trait EuclideanDomain: Ring + fmt::Debug {
    /// Euclidean size; `None` only for zero.
    fn size(&self) -> Option<u64>;

    /// `self = q·d + r` with `r = 0` or `size(r) < size(d)`.
    fn div_rem_e(&self, d: &Self) -> (Self, Self);

    /// A unit `u` (and its inverse) such that `u·self` is the preferred associate.
    fn normalizing_unit(&self) -> (Self, Self);

    fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem_e(self).1.is_zero()
    }
}

impl EuclideanDomain for BigInt {
    fn size(&self) -> Option<u64> {
        if self.is_zero() {
            None
        } else {
            // only comparisons matter, and sizes beyond u64 saturate
            Some(u64::try_from(self.abs()).unwrap_or(u64::MAX))
        }
    }

    fn div_rem_e(&self, d: &Self) -> (Self, Self) {
        self.div_rem(d)
    }

    fn normalizing_unit(&self) -> (Self, Self) {
        let u = if self.is_negative() { -BigInt::one() } else { BigInt::one() };
        (u.clone(), u)
    }
}

/// Units of `Q[σ, σ⁻¹]` are the monomials `c·σ^k`; the size is the span.
impl EuclideanDomain for LaurentPoly<BigRational> {
    fn size(&self) -> Option<u64> {
        self.span()
    }

    fn div_rem_e(&self, d: &Self) -> (Self, Self) {
        let (Some(la), Some(lb)) = (self.lowest(), d.lowest()) else {
            return (Self::zero(), self.clone());
        };
        let ring = PolyRing::new(Rationals);
        let (q, r) = ring.div_rem(&self.dense(), &d.dense());
        (LaurentPoly::from_dense(la - lb, &q), LaurentPoly::from_dense(la, &r))
    }

    fn normalizing_unit(&self) -> (Self, Self) {
        let Some(lo) = self.lowest() else {
            return (Self::one(), Self::one());
        };
        let assoc = self.integer_associate();
        let c = BigRational::from_integer(assoc.leading_coeff()) / self.leading_coeff();
        (LaurentPoly::monomial(c.clone(), -lo), LaurentPoly::monomial(c.recip(), lo))
    }
}

/// `U·A·V = D` with `D` diagonal, `D₁ | D₂ | …`, and `U`, `V` invertible.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: EuclideanDomain> Smith<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }
}

fn add_row_multiple<T: Ring>(m: &mut Matrix<T>, target: usize, src: usize, q: &T) {
    for j in 0..m.cols() {
        let x = m.get(target, j).clone() + q.clone() * m.get(src, j).clone();
        m.set(target, j, x);
    }
}

fn add_col_multiple<T: Ring>(m: &mut Matrix<T>, target: usize, src: usize, q: &T) {
    for i in 0..m.rows() {
        let x = m.get(i, target).clone() + q.clone() * m.get(i, src).clone();
        m.set(i, target, x);
    }
}

fn scale_row<T: Ring>(m: &mut Matrix<T>, i: usize, c: &T) {
    for j in 0..m.cols() {
        let x = c.clone() * m.get(i, j).clone();
        m.set(i, j, x);
    }
}

pub fn smith_normal_form<T: EuclideanDomain>(a: &Matrix<T>) -> Smith<T> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::<T>::identity(rows);
    let mut v = Matrix::<T>::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(u64, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if let Some(s) = d.get(i, j).size() {
                        if best.is_none_or(|(b, _, _)| s < b) {
                            best = Some((s, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                return Smith { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let (q, r) = d.get(i, t).div_rem_e(&pivot);
                if !q.is_zero() {
                    let nq = -q;
                    add_row_multiple(&mut d, i, t, &nq);
                    add_row_multiple(&mut u, i, t, &nq);
                }
                clean &= r.is_zero();
            }
            for j in t + 1..cols {
                let (q, r) = d.get(t, j).div_rem_e(&pivot);
                if !q.is_zero() {
                    let nq = -q;
                    add_col_multiple(&mut d, j, t, &nq);
                    add_col_multiple(&mut v, j, t, &nq);
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !pivot.divides(d.get(i, j))));
            match bad {
                Some(i) => {
                    let one = T::one();
                    add_row_multiple(&mut d, t, i, &one);
                    add_row_multiple(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        let (unit, _) = d.get(t, t).normalizing_unit();
        scale_row(&mut d, t, &unit);
        scale_row(&mut u, t, &unit);
    }
    Smith { u, d, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn integer_smith() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        let diag: Vec<i64> = s.diagonal().iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(diag, vec![2, 6, 12]);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let a = im(&[&[3, 0, 5], &[6, 0, 10]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.diagonal(), vec![BigInt::one(), BigInt::zero()]);
    }

    #[test]
    fn laurent_division() {
        let r = |t: &[(i64, i64)]| {
            LaurentPoly::from_terms(t.iter().map(|&(e, c)| (e, BigRational::from_integer(c.into()))))
        };
        let a = r(&[(-1, 1), (2, 3), (3, 1)]);
        let b = r(&[(1, 1), (2, -2)]);
        let (q, rem) = a.div_rem_e(&b);
        assert_eq!(&(&q * &b) + &rem, a);
        assert!(rem.size().unwrap_or(0) < b.size().unwrap());
        let (u, ui) = b.normalizing_unit();
        assert_eq!(&u * &ui, LaurentPoly::one());
        assert_eq!((&u * &b).integer_associate().to_rational(), &u * &b);
    }
}
