//! Truncated generalized power series with exact precision tracking.
//!
//! A series stores the finitely many known terms below its precision `π`;
//! everything at or above `π` is unknown. `precision = None` means the
//! series is exact (a finite sum).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;

use super::group::{Exponent, ExponentGroup};

#[derive(Clone)]
pub struct HahnSeries<F: Field> {
    field: F,
    group: Arc<ExponentGroup>,
    terms: Vec<(Exponent, F::Elem)>,
    precision: Option<Exponent>,
}

/// Sorts by exponent with a fallible comparator.
fn sort_exponents<T>(group: &ExponentGroup, items: &mut [(Exponent, T)]) -> Result<()> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    items.sort_by(|a, b| match group.cmp(&a.0, &b.0) {
        Ok(o) => o,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Ordering::Equal
        }
    });
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn min_opt(group: &ExponentGroup, a: Option<Exponent>, b: Option<Exponent>) -> Result<Option<Exponent>> {
    Ok(match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if group.le(&a, &b)? { a } else { b }),
    })
}

impl<F: Field> HahnSeries<F> {
    pub fn new(
        field: F,
        group: Arc<ExponentGroup>,
        terms: Vec<(Exponent, F::Elem)>,
        precision: Option<Exponent>,
    ) -> Result<Self> {
        for (e, _) in &terms {
            if !group.contains(e) {
                return Err(Error::LeavesGroup(e.to_string()));
            }
        }
        if let Some(p) = &precision {
            if !group.contains(p) {
                return Err(Error::LeavesGroup(p.to_string()));
            }
        }
        Self::assemble(field, group, terms, precision)
    }

    /// Sorts, merges equal exponents, drops zeros and anything at or
    /// beyond the precision.
    fn assemble(
        field: F,
        group: Arc<ExponentGroup>,
        mut terms: Vec<(Exponent, F::Elem)>,
        precision: Option<Exponent>,
    ) -> Result<Self> {
        sort_exponents(&group, &mut terms)?;
        let mut merged: Vec<(Exponent, F::Elem)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc = field.add(lc, &c),
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !field.is_zero(c));
        if let Some(p) = &precision {
            let mut keep = merged.len();
            for (i, (e, _)) in merged.iter().enumerate() {
                if !group.lt(e, p)? {
                    keep = i;
                    break;
                }
            }
            merged.truncate(keep);
        }
        Ok(HahnSeries { field, group, terms: merged, precision })
    }

    pub fn zero(field: F, group: Arc<ExponentGroup>) -> Self {
        HahnSeries { field, group, terms: Vec::new(), precision: None }
    }

    pub fn one(field: F, group: Arc<ExponentGroup>) -> Self {
        let c = field.one();
        Self::constant(field, group, c)
    }

    pub fn constant(field: F, group: Arc<ExponentGroup>, c: F::Elem) -> Self {
        let zero = group.zero();
        Self::monomial(field, group, c, zero)
    }

    pub fn monomial(field: F, group: Arc<ExponentGroup>, c: F::Elem, e: Exponent) -> Self {
        let terms = if field.is_zero(&c) { Vec::new() } else { vec![(e, c)] };
        HahnSeries { field, group, terms, precision: None }
    }

    /// Lowers the precision to `min(π, p)`, dropping terms that fall outside.
    pub fn with_precision(&self, p: Exponent) -> Result<Self> {
        let precision = min_opt(&self.group, self.precision.clone(), Some(p))?;
        Self::assemble(self.field.clone(), self.group.clone(), self.terms.clone(), precision)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn group(&self) -> &Arc<ExponentGroup> {
        &self.group
    }

    pub fn terms(&self) -> &[(Exponent, F::Elem)] {
        &self.terms
    }

    pub fn precision(&self) -> Option<&Exponent> {
        self.precision.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// Exactly zero (no terms and no unknown tail).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    /// No known terms below the precision.
    pub fn is_known_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> F::Elem {
        self.terms.iter().find(|(x, _)| x == e).map_or_else(|| self.field.zero(), |(_, c)| c.clone())
    }

    pub fn valuation(&self) -> Result<Exponent> {
        match (self.terms.first(), &self.precision) {
            (Some((e, _)), _) => Ok(e.clone()),
            (None, None) => Err(Error::ZeroSeries),
            (None, Some(p)) => Err(Error::InsufficientPrecision { requested: "valuation".into(), available: p.to_string() }),
        }
    }

    pub fn leading_coeff(&self) -> Result<F::Elem> {
        self.valuation()?;
        Ok(self.terms[0].1.clone())
    }

    /// Lower bound for the valuation: the first known term, else the
    /// precision; `None` for exact zero.
    pub fn valuation_bound(&self) -> Option<Exponent> {
        self.terms.first().map(|(e, _)| e.clone()).or_else(|| self.precision.clone())
    }

    /// `a↾γ`: the exact finite sum of the terms with exponent `≤ γ`.
    pub fn truncate(&self, gamma: &Exponent) -> Result<Self> {
        if let Some(p) = &self.precision {
            if !self.group.lt(gamma, p)? {
                return Err(Error::InsufficientPrecision { requested: gamma.to_string(), available: p.to_string() });
            }
        }
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if !self.group.le(e, gamma)? {
                break;
            }
            terms.push((e.clone(), c.clone()));
        }
        Ok(HahnSeries { field: self.field.clone(), group: self.group.clone(), terms, precision: None })
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.field != o.field || !(Arc::ptr_eq(&self.group, &o.group) || *self.group == *o.group) {
            return Err(Error::Mismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let precision = min_opt(&self.group, self.precision.clone(), o.precision.clone())?;
        let terms = self.terms.iter().chain(&o.terms).cloned().collect();
        Self::assemble(self.field.clone(), self.group.clone(), terms, precision)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.field.neg(c))).collect();
        HahnSeries { field: self.field.clone(), group: self.group.clone(), terms, precision: self.precision.clone() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            let mut z = Self::zero(self.field.clone(), self.group.clone());
            z.precision = self.precision.clone();
            return z;
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), self.field.mul(x, c))).collect();
        HahnSeries { field: self.field.clone(), group: self.group.clone(), terms, precision: self.precision.clone() }
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: &Exponent) -> Self {
        let terms = self.terms.iter().map(|(x, c)| (x.add(e), c.clone())).collect();
        let precision = self.precision.as_ref().map(|p| p.add(e));
        HahnSeries { field: self.field.clone(), group: self.group.clone(), terms, precision }
    }

    /// Precision `min(π_a + v(b), π_b + v(a))`, valuations taken as the
    /// known lower bounds.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.field.clone(), self.group.clone()));
        }
        let pa = match (&self.precision, o.valuation_bound()) {
            (Some(p), Some(v)) => Some(p.add(&v)),
            _ => None,
        };
        let pb = match (&o.precision, self.valuation_bound()) {
            (Some(p), Some(v)) => Some(p.add(&v)),
            _ => None,
        };
        let precision = min_opt(&self.group, pa, pb)?;
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                terms.push((ea.add(eb), self.field.mul(ca, cb)));
            }
        }
        Self::assemble(self.field.clone(), self.group.clone(), terms, precision)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.field.clone(), self.group.clone());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse with precision strictly above `cutoff`, by factoring out the
    /// leading term and summing the geometric series of the tail.
    pub fn invert_to(&self, cutoff: &Exponent) -> Result<Self> {
        let g = &self.group;
        let v = self.valuation()?;
        let c_inv = self.field.inv(&self.terms[0].1).ok_or(Error::ZeroSeries)?;
        // self = c·t^v·(1 + r)
        let unit = self.shift(&v.neg()).scale(&c_inv);
        let r = unit.sub(&Self::one(self.field.clone(), g.clone()))?;
        let delta = cutoff.add(&v);
        if let Some(pr) = r.precision() {
            if !g.lt(&delta, pr)? {
                return Err(Error::CutoffUnreachable { deficit: delta.sub(pr).to_string() });
            }
        }
        let one = Self::one(self.field.clone(), g.clone());
        let sum = if r.is_zero() {
            one
        } else if r.is_known_zero() {
            one.with_precision(r.precision.clone().expect("inexact"))?
        } else {
            let vr = r.valuation()?;
            let mut k: i64 = 1;
            while !g.lt(&delta, &vr.scale_int(k))? {
                k += 1;
            }
            let bound = vr.scale_int(k);
            let minus_r = r.neg();
            let mut sum = one.clone();
            let mut power = one;
            for _ in 1..k {
                power = power.mul(&minus_r)?.with_precision(bound.clone())?;
                sum = sum.add(&power)?;
            }
            sum.with_precision(bound)?
        };
        Ok(sum.scale(&c_inv).shift(&v.neg()))
    }

    /// Maps every coefficient through `f` (which must be additive and
    /// multiplicative, e.g. a Frobenius power) and every exponent through `g`.
    pub fn map_terms(
        &self,
        coeff: impl Fn(&F::Elem) -> F::Elem,
        mut exponent: impl FnMut(&Exponent) -> Exponent,
        precision: Option<Exponent>,
    ) -> Result<Self> {
        let terms = self.terms.iter().map(|(e, c)| (exponent(e), coeff(c))).collect();
        Self::assemble(self.field.clone(), self.group.clone(), terms, precision)
    }

    /// `a ↦ a^p` in characteristic `p`, computed termwise; precision `p·π`.
    pub fn frobenius(&self) -> Result<Self> {
        let p = self.field.characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        let pe = p as i64;
        let precision = self.precision.as_ref().map(|x| x.scale_int(pe));
        self.map_terms(|c| self.field.frobenius_power(c, 1), |e| e.scale_int(pe), precision)
    }

    /// Terms with exponent `< 0`, `= 0`, `> 0` (exact parts only).
    pub fn split_at_zero(&self) -> Result<(Self, F::Elem, Self)> {
        let (mut neg, mut pos) = (Vec::new(), Vec::new());
        let mut c0 = self.field.zero();
        for (e, c) in &self.terms {
            match self.group.sign(e)? {
                Ordering::Less => neg.push((e.clone(), c.clone())),
                Ordering::Equal => c0 = c.clone(),
                Ordering::Greater => pos.push((e.clone(), c.clone())),
            }
        }
        let mk = |terms| HahnSeries { field: self.field.clone(), group: self.group.clone(), terms, precision: None };
        Ok((mk(neg), c0, mk(pos)))
    }

    /// Same terms and precision, coefficients compared in the field.
    pub fn same_as(&self, o: &Self) -> bool {
        self.terms == o.terms && self.precision == o.precision
    }
}

impl<F: Field> fmt::Debug for HahnSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for HahnSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·t^{e}", self.field.format(c))?;
        }
        if let Some(p) = &self.precision {
            write!(f, " + O(t^{p})")?;
        }
        Ok(())
    }
}

impl<F: Field> PartialEq for HahnSeries<F> {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.same_as(o)
    }
}

/// Polynomial in `X` with series coefficients, ascending.
pub type SeriesPoly<F> = Vec<HahnSeries<F>>;

pub fn poly_eval<F: Field>(poly: &[HahnSeries<F>], x: &HahnSeries<F>) -> Result<HahnSeries<F>> {
    let mut acc = HahnSeries::zero(x.field().clone(), x.group().clone());
    for c in poly.iter().rev() {
        acc = acc.mul(x)?.add(c)?;
    }
    Ok(acc)
}

pub fn poly_derivative<F: Field>(poly: &[HahnSeries<F>]) -> Vec<HahnSeries<F>> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&c.field().from_i64(i as i64)))
        .collect()
}
