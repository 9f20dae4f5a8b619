//! Laurent polynomials in the symbol `σ`, generic over the coefficient ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;

/// Coefficient rings usable in [`LaurentPoly`].
pub trait Coeff: Num + Clone + Neg<Output = Self> + fmt::Debug + Send + Sync {}
impl<T: Num + Clone + Neg<Output = T> + fmt::Debug + Send + Sync> Coeff for T {}

/// `Σ c_e σ^e` with finitely many nonzero `c_e`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<i64, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut map: BTreeMap<i64, C> = BTreeMap::new();
        for (e, c) in terms {
            let entry = map.entry(e).or_insert_with(C::zero);
            *entry = entry.clone() + c;
        }
        let mut p = LaurentPoly { terms: map };
        p.normalize_terms();
        p
    }

    fn normalize_terms(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn monomial(c: C, e: i64) -> Self {
        Self::from_terms([(e, c)])
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// The symbol `σ` itself.
    pub fn sigma() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> C {
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    pub fn lowest(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn highest(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `highest − lowest`: the degree after clearing the monomial unit.
    pub fn span(&self) -> Option<u64> {
        Some((self.highest()? - self.lowest()?) as u64)
    }

    pub fn leading_coeff(&self) -> C {
        self.terms.values().next_back().cloned().unwrap_or_else(C::zero)
    }

    pub fn trailing_coeff(&self) -> C {
        self.terms.values().next().cloned().unwrap_or_else(C::zero)
    }

    /// Multiplies by `σ^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, x)| (*e, x.clone() * c.clone())))
    }

    /// A single nonzero term: a unit of the Laurent ring over a field.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Ascending coefficients of `σ^{-lowest} · self`.
    pub fn dense(&self) -> Vec<C> {
        let Some(lo) = self.lowest() else { return Vec::new() };
        let hi = self.highest().unwrap();
        (lo..=hi).map(|e| self.coeff(e)).collect()
    }

    /// Builds `σ^shift · Σ dense_i σ^i`.
    pub fn from_dense(shift: i64, dense: &[C]) -> Self {
        Self::from_terms(dense.iter().enumerate().map(|(i, c)| (shift + i as i64, c.clone())))
    }
}

impl<C: Coeff> Zero for LaurentPoly<C> {
    fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for LaurentPoly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            let entry = out.terms.entry(*e).or_insert_with(C::zero);
            *entry = entry.clone() + c.clone();
        }
        out.normalize_terms();
        out
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut terms: BTreeMap<i64, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let entry = terms.entry(ea + eb).or_insert_with(C::zero);
                *entry = entry.clone() + ca.clone() * cb.clone();
            }
        }
        let mut out = LaurentPoly { terms };
        out.normalize_terms();
        out
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Coeff> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl LaurentPoly<BigInt> {
    pub fn from_i64(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Splits `f = σ^shift · g` with `g(0) ≠ 0`.
    pub fn normalize(&self) -> Result<(i64, IntPoly)> {
        let lo = self.lowest().ok_or(Error::ZeroPolynomial)?;
        Ok((lo, IntPoly::new(self.dense())))
    }

    pub fn from_int_poly(shift: i64, g: &IntPoly) -> Self {
        Self::from_dense(shift, g.coeffs())
    }

    pub fn to_rational(&self) -> LaurentPoly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Evaluates at `σ = s` modulo `n`, with negative powers through `s^{-1}`.
    pub fn eval_mod(&self, s: i64, s_inv: i64, n: i64) -> i64 {
        let nb = BigInt::from(n);
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let base = if *e >= 0 { s } else { s_inv };
            let pw = BigInt::from(base).modpow(&BigInt::from(e.unsigned_abs()), &nb);
            acc = (acc + c * pw).mod_floor(&nb);
        }
        i64::try_from(acc).unwrap()
    }
}

impl LaurentPoly<BigRational> {
    /// Primitive integer associate with lowest exponent 0 and positive
    /// leading coefficient.
    pub fn integer_associate(&self) -> LaurentPoly<BigInt> {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly::from_int_poly(0, &IntPoly::from_rational(&self.dense()))
    }
}

impl<C: Coeff + fmt::Display + Signed> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if !a.is_one() || *e == 0 {
                write!(f, "{a}")?;
            }
            match *e {
                0 => {}
                1 => write!(f, "σ")?,
                _ => write!(f, "σ^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<C: Coeff + fmt::Display + Signed> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    terms: Vec<(i64, CoeffRepr)>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Str(String),
    Int(i64),
}

impl Serialize for LaurentPoly<BigInt> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson {
            terms: self.terms.iter().map(|(e, c)| (*e, CoeffRepr::Str(c.to_string()))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly<BigInt> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Object(LaurentJson),
            Bare(Vec<(i64, CoeffRepr)>),
        }
        let terms = match Either::deserialize(d)? {
            Either::Object(o) => o.terms,
            Either::Bare(v) => v,
        };
        let mut out = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            let c = match c {
                CoeffRepr::Int(i) => BigInt::from(i),
                CoeffRepr::Str(s) => s
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| serde::de::Error::custom(format!("coefficient {s:?} is not an integer")))?,
            };
            out.push((e, c));
        }
        Ok(LaurentPoly::from_terms(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type L = LaurentPoly<BigInt>;

    #[test]
    fn normalize_examples() {
        let f = L::from_i64(&[(2, 1), (1, -1)]);
        assert_eq!(f.normalize().unwrap(), (1, IntPoly::from_i64(&[-1, 1])));
        let g = L::from_i64(&[(1, 3), (0, -2)]);
        assert_eq!(g.normalize().unwrap(), (0, IntPoly::from_i64(&[-2, 3])));
        let h = L::from_i64(&[(-1, 2), (0, 2)]);
        assert_eq!(h.normalize().unwrap(), (-1, IntPoly::from_i64(&[2, 2])));
        assert_eq!(h.content(), BigInt::from(2));
        assert_eq!(L::zero().normalize(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let f = L::from_i64(&[(0, 1), (3, 0), (0, -1)]);
        assert!(f.is_zero());
        assert_eq!(f.lowest(), None);
    }

    #[test]
    fn display() {
        let f = L::from_i64(&[(2, 1), (1, -1), (0, -1)]);
        assert_eq!(f.to_string(), "σ^2 - σ - 1");
        assert_eq!(L::from_i64(&[(-1, 2)]).to_string(), "2σ^-1");
    }

    #[test]
    fn json_roundtrip_and_bare_input() {
        let f = L::from_i64(&[(1, 3), (0, -2)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"terms":[[0,"-2"],[1,"3"]]}"#);
        assert_eq!(serde_json::from_str::<L>(&s).unwrap(), f);
        let bare: L = serde_json::from_str("[[0,-2],[1,3]]").unwrap();
        assert_eq!(bare, f);
        let big: L = serde_json::from_str(r#"{"terms":[[5,"123456789012345678901234567890"]]}"#).unwrap();
        assert_eq!(big.coeff(5).to_string(), "123456789012345678901234567890");
        assert!(serde_json::from_str::<L>(r#"{"terms":[[0,"x"]]}"#).is_err());
    }

    #[test]
    fn eval_mod_uses_inverse_for_negative_powers() {
        // σ^-1 + σ at s = 2 mod 5: 3 + 2 = 0
        let f = L::from_i64(&[(-1, 1), (1, 1)]);
        assert_eq!(f.eval_mod(2, 3, 5), 0);
    }

    fn arb_laurent() -> impl Strategy<Value = L> {
        proptest::collection::vec((-4i64..5, -9i64..10), 0..6)
            .prop_map(|v| L::from_terms(v.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a * &L::one(), a.clone());
        }
    }
}
