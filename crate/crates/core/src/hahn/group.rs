//! Finite-rank ordered subgroups of `R` and their elements.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::rational_to_f64;
use crate::realalg::AlgebraicReal;

/// Default cap on bisections per weight during a comparison.
pub const DEFAULT_PRECISION_BITS: u32 = 512;

/// Environment variable overriding [`DEFAULT_PRECISION_BITS`].
pub const PRECISION_ENV: &str = "SIGMATORUS_PRECISION_BITS";

#[derive(Debug, Clone)]
pub enum Weight {
    Rational(BigRational),
    Algebraic(Arc<AlgebraicReal>),
}

impl Weight {
    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Rational(q) => rational_to_f64(q),
            Weight::Algebraic(a) => a.to_f64(),
        }
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Weight::Rational(a), Weight::Rational(b)) => a == b,
            (Weight::Algebraic(a), Weight::Algebraic(b)) => Arc::ptr_eq(a, b) || **a == **b,
            _ => false,
        }
    }
}

/// `Γ = (1/d)·(Z w_1 + … + Z w_r)`. The weights are trusted to be linearly
/// independent over `Q`; comparisons rely on it to terminate.
#[derive(Debug)]
pub struct ExponentGroup {
    weights: Vec<Weight>,
    denominator: u64,
    cap_bits: u32,
}

impl PartialEq for ExponentGroup {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.denominator == other.denominator
    }
}

/// Coordinates of an element of `Γ ⊗ Q` against the weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent {
    coords: Vec<BigRational>,
}

impl ExponentGroup {
    pub fn new(weights: Vec<Weight>, denominator: u64) -> Result<Arc<Self>> {
        if weights.is_empty() {
            return Err(Error::Invalid("exponent group needs at least one weight".into()));
        }
        if denominator == 0 {
            return Err(Error::Invalid("denominator scale must be positive".into()));
        }
        if weights.iter().any(|w| matches!(w, Weight::Rational(q) if q.is_zero())) {
            return Err(Error::Invalid("weights must be nonzero".into()));
        }
        let cap_bits = std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_PRECISION_BITS);
        Ok(Arc::new(ExponentGroup { weights, denominator, cap_bits }))
    }

    /// `(1/d)·Z`.
    pub fn rational(denominator: u64) -> Arc<Self> {
        Self::new(vec![Weight::Rational(BigRational::from_integer(1.into()))], denominator).expect("valid group")
    }

    pub fn integers() -> Arc<Self> {
        Self::rational(1)
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn cap_bits(&self) -> u32 {
        self.cap_bits
    }

    /// Highest refinement depth reached by any weight so far.
    pub fn max_refinement_bits(&self) -> u32 {
        self.weights
            .iter()
            .map(|w| match w {
                Weight::Algebraic(a) => a.bits(),
                Weight::Rational(_) => 0,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn zero(&self) -> Exponent {
        Exponent { coords: vec![BigRational::zero(); self.rank()] }
    }

    pub fn exponent(&self, coords: Vec<BigRational>) -> Result<Exponent> {
        if coords.len() != self.rank() {
            return Err(Error::Dimension(format!("exponent has {} coordinates, group rank is {}", coords.len(), self.rank())));
        }
        let e = Exponent { coords };
        if !self.contains(&e) {
            return Err(Error::LeavesGroup(e.to_string()));
        }
        Ok(e)
    }

    pub fn exponent_i64(&self, coords: &[i64]) -> Result<Exponent> {
        self.exponent(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Membership in the `(1/d)`-lattice.
    pub fn contains(&self, e: &Exponent) -> bool {
        let d = BigRational::from_integer(BigInt::from(self.denominator));
        e.coords.len() == self.rank() && e.coords.iter().all(|c| (c * &d).is_integer())
    }

    /// Whether `e ∈ pΓ`, tested on the stored lattice coordinates.
    pub fn divisible_by(&self, e: &Exponent, p: u64) -> bool {
        let d = BigRational::from_integer(BigInt::from(self.denominator));
        let p = BigInt::from(p);
        e.coords.iter().all(|c| {
            let scaled = c * &d;
            scaled.is_integer() && scaled.to_integer().is_multiple_of(&p)
        })
    }

    /// Sign of `Σ c_i w_i`.
    pub fn sign(&self, e: &Exponent) -> Result<Ordering> {
        if e.coords.iter().all(Zero::is_zero) {
            return Ok(Ordering::Equal);
        }
        if let Some(s) = self.float_sign(e) {
            return Ok(s);
        }
        let mut exact = BigRational::zero();
        let mut algebraic: Vec<(&BigRational, &AlgebraicReal)> = Vec::new();
        for (c, w) in e.coords.iter().zip(&self.weights) {
            if c.is_zero() {
                continue;
            }
            match w {
                Weight::Rational(q) => exact += c * q,
                Weight::Algebraic(a) => algebraic.push((c, a)),
            }
        }
        loop {
            let (mut lo, mut hi) = (exact.clone(), exact.clone());
            for (c, a) in &algebraic {
                let (l, h) = a.interval();
                if c.is_positive() {
                    lo += *c * l;
                    hi += *c * h;
                } else {
                    lo += *c * h;
                    hi += *c * l;
                }
            }
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if algebraic.is_empty() || (lo.is_zero() && hi.is_zero()) {
                return Ok(Ordering::Equal);
            }
            for (_, a) in &algebraic {
                if a.bits() >= self.cap_bits {
                    return Err(Error::RefinementExhausted { bits: self.cap_bits });
                }
                a.refine();
            }
        }
    }

    /// Sign decided in floating point when the value clears a rigorous
    /// error margin; `None` defers to exact refinement.
    fn float_sign(&self, e: &Exponent) -> Option<Ordering> {
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        let mut err = 0.0;
        for (c, w) in e.coords.iter().zip(&self.weights) {
            if c.is_zero() {
                continue;
            }
            let cf = rational_to_f64(c);
            let (wf, we) = match w {
                Weight::Rational(q) => (rational_to_f64(q), 0.0),
                Weight::Algebraic(a) => a.approx(),
            };
            if !cf.is_finite() || !wf.is_finite() {
                return None;
            }
            sum += cf * wf;
            magnitude += (cf * wf).abs();
            err += cf.abs() * we;
        }
        let margin = err + magnitude * 1e-12 + f64::MIN_POSITIVE;
        if sum > margin {
            Some(Ordering::Greater)
        } else if sum < -margin {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn cmp(&self, a: &Exponent, b: &Exponent) -> Result<Ordering> {
        self.sign(&a.sub(b))
    }

    pub fn lt(&self, a: &Exponent, b: &Exponent) -> Result<bool> {
        Ok(self.cmp(a, b)? == Ordering::Less)
    }

    pub fn le(&self, a: &Exponent, b: &Exponent) -> Result<bool> {
        Ok(self.cmp(a, b)? != Ordering::Greater)
    }

    pub fn min<'a>(&self, a: &'a Exponent, b: &'a Exponent) -> Result<&'a Exponent> {
        Ok(if self.le(a, b)? { a } else { b })
    }

    pub fn max<'a>(&self, a: &'a Exponent, b: &'a Exponent) -> Result<&'a Exponent> {
        Ok(if self.le(a, b)? { b } else { a })
    }

    /// Real value in floating point (for display and numeric checks).
    pub fn to_f64(&self, e: &Exponent) -> f64 {
        e.coords.iter().zip(&self.weights).map(|(c, w)| rational_to_f64(c) * w.to_f64()).sum()
    }
}

impl Exponent {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Exponent) -> Exponent {
        Exponent { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Exponent) -> Exponent {
        Exponent { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Exponent {
        Exponent { coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Exponent {
        Exponent { coords: self.coords.iter().map(|a| a * q).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Exponent {
        self.scale(&BigRational::from_integer(n.into()))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
