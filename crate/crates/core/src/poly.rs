//! Dense univariate polynomials over a [`Field`], ascending coefficients.
//!
//! The zero polynomial is the empty vector; every other polynomial has a
//! nonzero last coefficient.

use num_bigint::BigUint;

use crate::field::Field;

pub type Poly<F> = Vec<<F as Field>::Elem>;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyRing<F: Field> {
    field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn trim(&self, mut a: Poly<F>) -> Poly<F> {
        while a.last().is_some_and(|c| self.field.is_zero(c)) {
            a.pop();
        }
        a
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self, a: &[F::Elem]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F> {
        self.trim(vec![c])
    }

    pub fn one(&self) -> Poly<F> {
        vec![self.field.one()]
    }

    /// `c·x^n`.
    pub fn monomial(&self, c: F::Elem, n: usize) -> Poly<F> {
        if self.field.is_zero(&c) {
            return Vec::new();
        }
        let mut v = vec![self.field.zero(); n];
        v.push(c);
        v
    }

    pub fn x(&self) -> Poly<F> {
        self.monomial(self.field.one(), 1)
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        let n = a.len().max(b.len());
        let zero = self.field.zero();
        let v = (0..n)
            .map(|i| self.field.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect();
        self.trim(v)
    }

    pub fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        let n = a.len().max(b.len());
        let zero = self.field.zero();
        let v = (0..n)
            .map(|i| self.field.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect();
        self.trim(v)
    }

    pub fn neg(&self, a: &[F::Elem]) -> Poly<F> {
        a.iter().map(|c| self.field.neg(c)).collect()
    }

    pub fn scale(&self, a: &[F::Elem], c: &F::Elem) -> Poly<F> {
        self.trim(a.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(x, y));
            }
        }
        self.trim(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>) {
        let db = self.degree(b).expect("division by the zero polynomial");
        let lc_inv = self.field.inv(&b[db]).expect("leading coefficient is nonzero");
        let mut r = a.to_vec();
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![self.field.zero(); r.len() - db];
        for top in (db..r.len()).rev() {
            let c = self.field.mul(&r[top], &lc_inv);
            if self.field.is_zero(&c) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let idx = top - db + j;
                r[idx] = self.field.sub(&r[idx], &self.field.mul(&c, y));
            }
            q[top - db] = c;
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    pub fn rem(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        self.div_rem(a, b).1
    }

    pub fn monic(&self, a: &[F::Elem]) -> Poly<F> {
        match a.last() {
            None => Vec::new(),
            Some(lc) => {
                let inv = self.field.inv(lc).unwrap();
                self.scale(a, &inv)
            }
        }
    }

    pub fn lc(&self, a: &[F::Elem]) -> F::Elem {
        a.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        let mut a = self.trim(a.to_vec());
        let mut b = self.trim(b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Extended gcd: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn xgcd(&self, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>, Poly<F>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (self.one(), Vec::new());
        let (mut t0, mut t1) = (Vec::new(), self.one());
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_empty() {
            return (r0, s0, t0);
        }
        let inv = self.field.inv(r0.last().unwrap()).unwrap();
        (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
    }

    pub fn derivative(&self, a: &[F::Elem]) -> Poly<F> {
        let v = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.field.mul(c, &self.field.from_i64(i as i64)))
            .collect();
        self.trim(v)
    }

    pub fn eval(&self, a: &[F::Elem], x: &F::Elem) -> F::Elem {
        a.iter()
            .rev()
            .fold(self.field.zero(), |acc, c| self.field.add(&self.field.mul(&acc, x), c))
    }

    /// `base^e mod m`.
    pub fn pow_mod(&self, base: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Poly<F> {
        let base = self.rem(base, m);
        let mut acc = self.rem(&self.one(), m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
        }
        acc
    }

    pub fn pow(&self, base: &[F::Elem], e: u32) -> Poly<F> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, base);
        }
        acc
    }

    /// Applies a coefficient map (e.g. a field automorphism).
    pub fn map_coeffs(&self, a: &[F::Elem], f: impl Fn(&F::Elem) -> F::Elem) -> Poly<F> {
        self.trim(a.iter().map(f).collect())
    }

    pub fn is_one(&self, a: &[F::Elem]) -> bool {
        a.len() == 1 && self.field.is_one(&a[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
    }

    #[test]
    fn division_identity_over_q() {
        let r = PolyRing::new(Rationals);
        let a = q(&[-1, 0, 0, 1]);
        let b = q(&[1, 1]);
        let (qq, rr) = r.div_rem(&a, &b);
        assert_eq!(r.add(&r.mul(&qq, &b), &rr), a);
        assert_eq!(r.gcd(&a, &q(&[-1, 1])), q(&[-1, 1]));
    }

    #[test]
    fn xgcd_bezout_mod_p() {
        let r = PolyRing::new(PrimeField::new(7).unwrap());
        let a = vec![1, 2, 3, 1];
        let b = vec![5, 0, 1];
        let (g, s, t) = r.xgcd(&a, &b);
        assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&t, &b)), g);
    }

    #[test]
    fn frobenius_by_pow_mod() {
        // x^7 ≡ x mod (x^2 + 1) fails only if F_49 element; check x^49 ≡ x
        let r = PolyRing::new(PrimeField::new(7).unwrap());
        let m = vec![1, 0, 1];
        let x49 = r.pow_mod(&r.x(), &BigUint::from(49u32), &m);
        assert_eq!(x49, r.x());
    }
}
