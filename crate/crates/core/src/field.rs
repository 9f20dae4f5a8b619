//! Coefficient fields: the rationals and finite fields `F_p`, `F_{p^k}`.
//!
//! A field is a value (a "descriptor") that performs arithmetic on its
//! elements. This lets finite fields carry their modulus at runtime while
//! the polynomial and series code stays generic.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::arith::{is_prime, pow_mod};
use crate::error::{Error, Result};

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn characteristic(&self) -> u64;
    fn format(&self, a: &Self::Elem) -> String;

    /// `a ↦ a^{p^e}`; the identity in characteristic zero.
    fn frobenius_power(&self, a: &Self::Elem, _e: u32) -> Self::Elem {
        a.clone()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

pub trait FiniteField: Field {
    /// Number of elements `q`.
    fn order(&self) -> u64;
    /// Degree `k` over the prime field.
    fn degree(&self) -> u32;
    /// Bijection `0..q → F_q`.
    fn element(&self, index: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.element(rng.random_range(0..self.order()))
    }
    /// The unique `b` with `b^p = a`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let p = self.characteristic();
        let e = BigUint::from(self.order() / p);
        self.pow(a, &e)
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// The prime field `F_p` with elements stored as `u64` residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((n % &p) + &p) % &p;
        r.to_u64().unwrap()
    }

    /// Symmetric lift of a residue to `(-p/2, p/2]`.
    pub fn lift(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| pow_mod(*a, self.p - 2, self.p))
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn frobenius_power(&self, a: &u64, _e: u32) -> u64 {
        *a
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> u32 {
        1
    }
    fn element(&self, index: u64) -> u64 {
        index % self.p
    }
    fn index_of(&self, a: &u64) -> u64 {
        *a
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
}

/// `F_{p^k}` as `F_p[x]/(m(x))` for a monic irreducible `m` of degree `k`.
///
/// Elements are coefficient vectors of length exactly `k` (ascending).
#[derive(Clone, PartialEq, Eq)]
pub struct GaloisField {
    base: PrimeField,
    k: u32,
    modulus: Arc<Vec<u64>>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.base.p, self.k, self.modulus)
    }
}

impl GaloisField {
    /// `F_{p^k}` with the lexicographically first monic irreducible modulus.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let base = PrimeField::new(p)?;
        if k == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q < 1 << 32)
            .ok_or_else(|| Error::Invalid(format!("field of order {p}^{k} too large")))?;
        let _ = q;
        let ring = crate::poly::PolyRing::new(base);
        let count = p.pow(k);
        for idx in 0..count {
            let mut m: Vec<u64> = (0..k).map(|i| (idx / p.pow(i)) % p).collect();
            m.push(1);
            if k == 1 || (m[0] != 0 && crate::ffactor::is_irreducible(&ring, &m)) {
                return Ok(GaloisField { base, k, modulus: Arc::new(m) });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// `F_{p^k}` with an explicit modulus (ascending coefficients, monic).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let ring = crate::poly::PolyRing::new(base);
        let m = ring.trim(m);
        if m.len() < 2 || *m.last().unwrap() != 1 {
            return Err(Error::Invalid("modulus must be monic of degree ≥ 1".into()));
        }
        if !crate::ffactor::is_irreducible(&ring, &m) {
            return Err(Error::Reducible);
        }
        let k = (m.len() - 1) as u32;
        Ok(GaloisField { base, k, modulus: Arc::new(m) })
    }

    pub fn prime_field(&self) -> PrimeField {
        self.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Embeds a prime-field residue.
    pub fn constant(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.k as usize];
        v[0] = c % self.base.p;
        v
    }

    /// The class of `x`, a primitive element when the modulus is primitive.
    pub fn generator(&self) -> Vec<u64> {
        if self.k == 1 {
            // x ≡ -m0 in degree one
            return vec![self.base.neg(&self.modulus[0])];
        }
        let mut v = vec![0; self.k as usize];
        v[1] = 1;
        v
    }

    /// Packs an element as the integer `Σ a_i p^i`.
    pub fn pack(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.base.p + c)
    }

    pub fn unpack(&self, mut n: u64) -> Vec<u64> {
        let p = self.base.p;
        (0..self.k)
            .map(|_| {
                let c = n % p;
                n /= p;
                c
            })
            .collect()
    }
}

impl Field for GaloisField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.k as usize]
    }
    fn one(&self) -> Vec<u64> {
        self.constant(1)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let k = self.k as usize;
        let p = self.base.p;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // reduce by the monic modulus from the top
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..k {
                let t = c * self.modulus[i] % p;
                prod[top - k + i] = (prod[top - k + i] + p - t) % p;
            }
        }
        prod.truncate(k);
        prod
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, &BigUint::from(self.order() - 2)))
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.constant(self.base.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn format(&self, a: &Vec<u64>) -> String {
        self.pack(a).to_string()
    }
    fn frobenius_power(&self, a: &Vec<u64>, e: u32) -> Vec<u64> {
        let e = e % self.k;
        let exp = BigUint::from(self.base.p).pow(e);
        self.pow(a, &exp)
    }
}

impl FiniteField for GaloisField {
    fn order(&self) -> u64 {
        self.base.p.pow(self.k)
    }
    fn degree(&self) -> u32 {
        self.k
    }
    fn element(&self, index: u64) -> Vec<u64> {
        self.unpack(index % self.order())
    }
    fn index_of(&self, a: &Vec<u64>) -> u64 {
        self.pack(a)
    }
}

/// Parses a rational from `"a"`, `"-a/b"` or a JSON-style integer string.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// Approximates a rational as `f64`.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down to avoid overflow
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000) as usize;
            let n = (x.numer().abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            let v = n / d;
            if x.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}
