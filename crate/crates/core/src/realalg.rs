//! Real algebraic numbers as (squarefree integer polynomial, isolating
//! interval), refined on demand by bisection.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{rational_to_f64, Rationals};
use crate::intpoly::IntPoly;
use crate::poly::PolyRing;

/// Closed interval `[lo, hi]` containing exactly one root; when `lo < hi` the
/// polynomial changes sign strictly between the endpoints.
#[derive(Debug, Clone, PartialEq)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
}

pub struct AlgebraicReal {
    minpoly: IntPoly,
    state: RwLock<Interval>,
    bits: AtomicU32,
    approx: f64,
    approx_err: f64,
}

impl AlgebraicReal {
    /// Validates that `minpoly` is squarefree and has exactly one root in
    /// `(lo, hi)`, with no root at either endpoint.
    pub fn new(minpoly: IntPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        let deg = minpoly.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Err(Error::Invalid("minimal polynomial must be nonconstant".into()));
        }
        if lo >= hi {
            return Err(Error::Invalid("isolating interval must have lo < hi".into()));
        }
        if !minpoly.gcd(&minpoly.derivative()).degree().is_some_and(|d| d == 0) {
            return Err(Error::NotSquarefree);
        }
        if minpoly.eval(&lo).is_zero() || minpoly.eval(&hi).is_zero() {
            return Err(Error::Invalid("interval endpoint is a root".into()));
        }
        let count = sturm_count(&minpoly, &lo, &hi);
        if count != 1 {
            return Err(Error::Invalid(format!("interval isolates {count} roots, expected 1")));
        }
        let mut x = AlgebraicReal {
            minpoly: minpoly.primitive_part(),
            state: RwLock::new(Interval { lo, hi }),
            bits: AtomicU32::new(0),
            approx: 0.0,
            approx_err: f64::INFINITY,
        };
        let (approx, approx_err) = x.float_enclosure();
        x.approx = approx;
        x.approx_err = approx_err;
        Ok(x)
    }

    /// Midpoint and error radius after refining a private copy to about 60 bits.
    fn float_enclosure(&self) -> (f64, f64) {
        let local = self.clone();
        loop {
            let (lo, hi) = local.interval();
            let width = rational_to_f64(&(&hi - &lo));
            let scale = rational_to_f64(&hi.abs()).max(rational_to_f64(&lo.abs())).max(1.0);
            if width <= scale * 2f64.powi(-60) {
                let mid = rational_to_f64(&((lo + hi) / BigRational::from_integer(2.into())));
                return (mid, width + scale * 4.0 * f64::EPSILON);
            }
            local.refine();
        }
    }

    /// Float value and a rigorous bound on its distance to the true root.
    pub fn approx(&self) -> (f64, f64) {
        (self.approx, self.approx_err)
    }

    /// `√n` for a non-square positive integer `n`.
    pub fn sqrt(n: u64) -> Result<Self> {
        let r = num_integer::Roots::sqrt(&n);
        if r * r == n {
            return Err(Error::Invalid(format!("{n} is a perfect square")));
        }
        let f = IntPoly::new(vec![-BigInt::from(n), BigInt::zero(), BigInt::one()]);
        Self::new(f, BigRational::from_integer(r.into()), BigRational::from_integer((r + 1).into()))
    }

    /// The root of the squarefree `f` closest to `x`, isolated by widening
    /// or narrowing a window around `x` until it holds exactly one root.
    pub fn near(f: &IntPoly, x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Invalid("approximation must be finite".into()));
        }
        let center = BigRational::from_float(x).expect("finite");
        let mut radius = BigRational::from_float(1e-9 * x.abs().max(1.0)).expect("finite");
        let two = BigRational::from_integer(2.into());
        for _ in 0..400 {
            let (lo, hi) = (&center - &radius, &center + &radius);
            let count = sturm_count(f, &lo, &hi);
            if count == 1 && !f.eval(&lo).is_zero() && !f.eval(&hi).is_zero() {
                return Self::new(f.clone(), lo, hi);
            }
            if count == 0 {
                radius *= &two;
            } else {
                // several roots, or a root on the boundary
                radius *= BigRational::new(2.into(), 3.into());
            }
        }
        Err(Error::Invalid(format!("could not isolate a root of {f} near {x}")))
    }

    /// `−x`, with minimal polynomial `f(−X)`.
    pub fn neg(&self) -> Self {
        let coeffs = self
            .minpoly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        let (lo, hi) = self.interval();
        AlgebraicReal {
            minpoly: IntPoly::new(coeffs),
            state: RwLock::new(Interval { lo: -hi, hi: -lo }),
            bits: AtomicU32::new(self.bits()),
            approx: -self.approx,
            approx_err: self.approx_err,
        }
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn interval(&self) -> (BigRational, BigRational) {
        let s = self.state.read().expect("interval lock");
        (s.lo.clone(), s.hi.clone())
    }

    /// Bisections performed so far on this handle.
    pub fn bits(&self) -> u32 {
        self.bits.load(AtomicOrdering::Relaxed)
    }

    /// Halves the isolating interval once.
    pub fn refine(&self) {
        let mut s = self.state.write().expect("interval lock");
        if s.lo == s.hi {
            return;
        }
        let mid = (&s.lo + &s.hi) / BigRational::from_integer(2.into());
        let fm = self.minpoly.eval(&mid);
        if fm.is_zero() {
            s.lo = mid.clone();
            s.hi = mid;
        } else if fm.signum() == self.minpoly.eval(&s.lo).signum() {
            s.lo = mid;
        } else {
            s.hi = mid;
        }
        self.bits.fetch_add(1, AtomicOrdering::Relaxed);
    }

    pub fn to_f64(&self) -> f64 {
        self.approx
    }
}

impl Clone for AlgebraicReal {
    fn clone(&self) -> Self {
        AlgebraicReal {
            minpoly: self.minpoly.clone(),
            state: RwLock::new(self.state.read().expect("interval lock").clone()),
            bits: AtomicU32::new(self.bits()),
            approx: self.approx,
            approx_err: self.approx_err,
        }
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.interval();
        write!(f, "root of {} in [{lo}, {hi}]", self.minpoly)
    }
}

impl PartialEq for AlgebraicReal {
    /// Same polynomial and overlapping intervals (hence the same root).
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.interval();
        let (c, d) = other.interval();
        self.minpoly == other.minpoly && a <= d && c <= b
    }
}

/// Number of distinct real roots of `f` in `(a, b]`.
pub fn sturm_count(f: &IntPoly, a: &BigRational, b: &BigRational) -> usize {
    let ring = PolyRing::new(Rationals);
    let mut seq = vec![f.to_rational(), f.derivative().to_rational()];
    loop {
        let n = seq.len();
        let r = ring.rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(ring.neg(&r));
    }
    let changes = |x: &BigRational| {
        let signs: Vec<i32> = seq
            .iter()
            .map(|p| ring.eval(p, x))
            .filter(|v| !v.is_zero())
            .map(|v| if v.is_positive() { 1 } else { -1 })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(a).saturating_sub(changes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_refines() {
        let s = AlgebraicReal::sqrt(2).unwrap();
        for _ in 0..40 {
            s.refine();
        }
        assert_eq!(s.bits(), 40);
        assert!((s.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!(AlgebraicReal::sqrt(9).is_err());
    }

    #[test]
    fn rejects_bad_intervals() {
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        let q = |n: i64| BigRational::from_integer(n.into());
        assert!(AlgebraicReal::new(f.clone(), q(-2), q(2)).is_err());
        assert!(AlgebraicReal::new(f.clone(), q(0), q(2)).is_ok());
        assert_eq!(AlgebraicReal::new(IntPoly::from_i64(&[1, 2, 1]), q(-2), q(0)).err(), Some(Error::NotSquarefree));
        assert_eq!(sturm_count(&IntPoly::from_i64(&[0, -1, 0, 1]), &q(-5), &q(5)), 3);
    }
}
