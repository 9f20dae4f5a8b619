//! Wild-ramification obstructions along recurrent valuation directions.
//!
//! A datum is a finite set `J` of integer vectors `ν` with coefficients over
//! `F_{p^k}`, standing for the Artin–Schreier right-hand side
//! `Σ c_ν t^{ν·γ}` where `γ` is a recurrent direction of the companion
//! matrix. For a modular equation no power of the companion matrix has a
//! power of `p` as an eigenvalue, which rules out the proportionalities that
//! a σ-stable extension carrying the datum would force.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::difference::{companion_matrix, companion_of, is_modular};
use crate::error::{Error, Result};
use crate::factor::{factor, squarefree_over_q};
use crate::field::{Field, GaloisField};
use crate::hahn::{Exponent, ExponentGroup, GfSeries, HahnSeries, Weight};
use crate::intpoly::IntPoly;
use crate::realalg::AlgebraicReal;
use crate::recurrence::{eigenvalue_power_of_p, find_recurrent_direction, Budget, Method, Recurrence, RecurrenceWitness};
use crate::roots::{aberth, eigenvalues};
use crate::{IntLaurent, RatMatrix};

#[derive(Debug, Clone)]
pub struct RamificationDatum {
    pub p: u64,
    pub field: GaloisField,
    pub group: Arc<ExponentGroup>,
    /// `(ν, c_ν)` with `ν ∈ Z^n` and `c_ν ≠ 0`.
    pub terms: Vec<(Vec<i64>, Vec<u64>)>,
}

impl RamificationDatum {
    pub fn new(field: GaloisField, group: Arc<ExponentGroup>, terms: Vec<(Vec<i64>, Vec<u64>)>) -> Result<Self> {
        let p = field.characteristic();
        for (i, (nu, c)) in terms.iter().enumerate() {
            if nu.len() != group.rank() {
                return Err(Error::InvalidDatum(format!("exponent vector {i} has length {}, expected {}", nu.len(), group.rank())));
            }
            if field.is_zero(c) {
                return Err(Error::InvalidDatum(format!("coefficient {i} is zero")));
            }
            if terms[..i].iter().any(|(other, _)| other == nu) {
                return Err(Error::InvalidDatum(format!("exponent vector {nu:?} repeated")));
            }
        }
        Ok(RamificationDatum { p, field, group, terms })
    }

    pub fn exponent(&self, nu: &[i64]) -> Result<Exponent> {
        self.group.exponent_i64(nu)
    }

    /// `Σ c_ν t^{ν·γ}` as an exact series.
    pub fn series(&self) -> Result<GfSeries> {
        let terms = self.terms.iter().map(|(nu, c)| Ok((self.exponent(nu)?, c.clone()))).collect::<Result<Vec<_>>>()?;
        HahnSeries::new(self.field.clone(), self.group.clone(), terms, None)
    }
}

/// `θ = min_ν ν·γ`, required negative and outside `pΓ`.
pub fn theta_invariant(datum: &RamificationDatum) -> Result<Exponent> {
    let g = &datum.group;
    let mut best: Option<Exponent> = None;
    for (nu, _) in &datum.terms {
        let e = datum.exponent(nu)?;
        best = Some(match best {
            Some(b) if g.le(&b, &e)? => b,
            _ => e,
        });
    }
    let theta = best.ok_or(Error::EmptyDatum)?;
    if g.divisible_by(&theta, datum.p) {
        return Err(Error::DatumNotReduced);
    }
    if g.sign(&theta)? != std::cmp::Ordering::Less {
        return Err(Error::InvalidDatum(format!("θ = {theta} is not negative")));
    }
    Ok(theta)
}

/// Every exponent of the datum negative and outside `pΓ`.
pub fn check_datum(datum: &RamificationDatum) -> Result<()> {
    for (nu, _) in &datum.terms {
        let e = datum.exponent(nu)?;
        if datum.group.divisible_by(&e, datum.p) {
            return Err(Error::DatumNotReduced);
        }
        if datum.group.sign(&e)? != std::cmp::Ordering::Less {
            return Err(Error::InvalidDatum(format!("exponent {nu:?}·γ is not negative")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Obstructed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theta {
    pub exponent: Vec<String>,
    /// `ν·γ` for the unit direction `γ`.
    pub value: f64,
}

/// One pair of return times `k < l` and the exact test on `A^{l−k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub k: u64,
    pub l: u64,
    /// `m` with `p^m` an eigenvalue of `A^{l−k}`, if any.
    pub eigenvalue_exponent: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Budgets {
    pub epsilon: f64,
    #[serde(flatten)]
    pub budget: Budget,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub verdict: Verdict,
    pub theta: Option<Theta>,
    pub witness: Option<(u32, i64)>,
    pub method: Option<Method>,
    pub direction: Option<Vec<f64>>,
    pub trace: Vec<TraceStep>,
    pub budgets: Budgets,
}

/// Datum before the exponent group is fixed.
#[derive(Debug, Clone)]
pub struct DatumSpec {
    pub field: GaloisField,
    pub terms: Vec<(Vec<i64>, Vec<u64>)>,
    /// Caller-supplied `Γ`; when absent it is built from the recurrence
    /// witness and oriented so that the smallest `ν·γ` is negative.
    pub group: Option<Arc<ExponentGroup>>,
}

pub fn obstruct(f: &IntLaurent, p: u64, spec: &DatumSpec, epsilon: f64, budget: &Budget) -> Result<ObstructionReport> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if spec.field.characteristic() != p {
        return Err(Error::InvalidDatum(format!("coefficients live in characteristic {}, not {p}", spec.field.characteristic())));
    }
    if !is_modular(f, p)?.modular {
        return Err(Error::HypothesisViolated(format!("{f} is not modular for p = {p}")));
    }
    let a = companion_matrix(f)?;
    let budgets = Budgets { epsilon, budget: budget.clone() };
    let witness = match find_recurrent_direction::<f64>(&a, epsilon, budget)? {
        Recurrence::Found(w) => w,
        Recurrence::BudgetExhausted { .. } => {
            return Ok(ObstructionReport {
                verdict: Verdict::Inconclusive,
                theta: None,
                witness: None,
                method: None,
                direction: None,
                trace: Vec::new(),
                budgets,
            })
        }
    };
    let (group, direction) = match &spec.group {
        Some(g) => (g.clone(), witness.direction.vector().to_vec()),
        None => oriented_group(f, &a, &witness, &spec.terms)?,
    };
    let datum = RamificationDatum::new(spec.field.clone(), group, spec.terms.clone())?;
    check_datum(&datum)?;
    let theta = theta_invariant(&datum)?;
    let norm = datum.group.weights().iter().map(|w| w.to_f64().powi(2)).sum::<f64>().sqrt();
    let theta = Theta { exponent: theta.coords().iter().map(ToString::to_string).collect(), value: datum.group.to_f64(&theta) / norm };
    let power = eigenvalue_power_of_p(&a, p, budget.j_max)?;
    let trace = orbit_trace(&a, p, &witness.return_times, budget)?;
    let decided = power.is_none() && !trace.is_empty() && trace.iter().all(|s| s.eigenvalue_exponent.is_none());
    Ok(ObstructionReport {
        verdict: if decided { Verdict::Obstructed } else { Verdict::Inconclusive },
        theta: Some(theta),
        witness: power,
        method: Some(witness.method),
        direction: Some(direction),
        trace,
        budgets,
    })
}

/// Pairs of return times at distance at most `j_max`, each tested exactly.
fn orbit_trace(a: &RatMatrix, p: u64, times: &[u64], budget: &Budget) -> Result<Vec<TraceStep>> {
    let mut cache: BTreeMap<u64, Option<i64>> = BTreeMap::new();
    let mut trace = Vec::new();
    for (i, &k) in times.iter().enumerate() {
        for &l in &times[i + 1..] {
            let j = l - k;
            if j > budget.j_max as u64 || trace.len() as u64 >= budget.horizon {
                break;
            }
            let m = match cache.get(&j) {
                Some(m) => *m,
                None => {
                    let m = eigenvalue_power_of_p(&a.pow(j as u32), p, 1)?.map(|(_, m)| m);
                    cache.insert(j, m);
                    m
                }
            };
            trace.push(TraceStep { k, l, eigenvalue_exponent: m });
        }
    }
    Ok(trace)
}

fn group_from_weights(weights: Vec<Weight>, flip: bool) -> Result<Arc<ExponentGroup>> {
    let weights = weights
        .into_iter()
        .map(|w| match (w, flip) {
            (w, false) => w,
            (Weight::Rational(q), true) => Weight::Rational(-q),
            (Weight::Algebraic(x), true) => Weight::Algebraic(Arc::new(x.neg())),
        })
        .collect();
    ExponentGroup::new(weights, 1)
}

/// Builds `Γ = Σ Z γ_i` from the witness. A dominant real eigenvalue gives
/// exact algebraic weights; other witnesses use the binary rationals of the
/// float direction.
fn oriented_group(
    f: &IntLaurent,
    a: &RatMatrix,
    witness: &RecurrenceWitness<f64>,
    terms: &[(Vec<i64>, Vec<u64>)],
) -> Result<(Arc<ExponentGroup>, Vec<f64>)> {
    let weights = match witness.method {
        Method::DominantReal => eigendirection_weights(f, a)?,
        _ => witness
            .direction
            .vector()
            .iter()
            .map(|&x| Weight::Rational(BigRational::from_float(x).expect("finite direction")))
            .collect(),
    };
    let group = group_from_weights(weights.clone(), false)?;
    let mut smallest: Option<Exponent> = None;
    for (nu, _) in terms {
        let e = group.exponent_i64(nu)?;
        smallest = Some(match smallest {
            Some(s) if group.le(&s, &e)? => s,
            _ => e,
        });
    }
    let flip = match &smallest {
        Some(s) => group.sign(s)? == std::cmp::Ordering::Greater,
        None => false,
    };
    let group = if flip { group_from_weights(weights, true)? } else { group };
    let raw: Vec<f64> = group.weights().iter().map(Weight::to_f64).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok((group, raw.iter().map(|x| x / norm).collect()))
}

/// Exact eigenvector of the companion matrix for its dominant real
/// eigenvalue `λ`, normalized to last entry 1. With `c_i` the last column,
/// `v_{i−1} = λ v_i − c_i`, so each entry is a polynomial in `λ`; its
/// minimal data comes from the characteristic polynomial of that polynomial
/// evaluated at the companion matrix of `λ`'s minimal polynomial.
fn eigendirection_weights(f: &IntLaurent, a: &RatMatrix) -> Result<Vec<Weight>> {
    let n = a.rows();
    let lambda = eigenvalues::<f64>(a)
        .into_iter()
        .filter(|z| z.im.abs() < 1e-9)
        .max_by(|x, y| x.re.abs().total_cmp(&y.re.abs()))
        .ok_or(Error::Invalid("no real eigenvalue".into()))?
        .re;
    let (_, g) = f.normalize()?;
    let minpoly = factor(&g)?
        .factors
        .into_iter()
        .map(|(h, _)| h)
        .min_by(|x, y| root_distance(x, lambda).total_cmp(&root_distance(y, lambda)))
        .expect("nonconstant");
    let ch = companion_of(&minpoly);
    let mut polys: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    for i in (1..n).rev() {
        let prev = polys.last().expect("nonempty");
        let mut next = vec![BigRational::zero()];
        next.extend(prev.iter().cloned());
        next[0] -= a.get(i, n - 1);
        polys.push(next);
    }
    polys.reverse();
    polys.iter().map(|poly| exact_weight(poly, &ch, lambda)).collect()
}

fn root_distance(h: &IntPoly, x: f64) -> f64 {
    let coeffs: Vec<f64> = h.to_rational().iter().map(crate::field::rational_to_f64).collect();
    aberth(&coeffs).into_iter().map(|z| (z - Complex::new(x, 0.0)).norm()).fold(f64::INFINITY, f64::min)
}

/// `poly(λ)` as a weight, where `ch` is the companion matrix of `λ`'s minimal polynomial.
fn exact_weight(poly: &[BigRational], ch: &RatMatrix, lambda: f64) -> Result<Weight> {
    let m = poly
        .iter()
        .rev()
        .fold(RatMatrix::zeros(ch.rows(), ch.rows()), |acc, c| acc.mul(ch).add(&RatMatrix::scalar(ch.rows(), c.clone())));
    let cp = IntPoly::from_rational(&m.charpoly());
    let radical = squarefree_over_q(&cp).into_iter().fold(IntPoly::one(), |acc, (part, _)| &acc * &part);
    if radical.degree() == Some(1) {
        return Ok(Weight::Rational(BigRational::new(-radical.coeff(0), radical.coeff(1))));
    }
    let value = poly.iter().rev().fold(0.0, |acc, c| acc * lambda + crate::field::rational_to_f64(c));
    Ok(Weight::Algebraic(Arc::new(AlgebraicReal::near(&radical, value)?)))
}
