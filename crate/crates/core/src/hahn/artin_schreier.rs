//! Reduction of `X^p − X = b` to a ramification certificate.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Field, FiniteField, PrimeField};

use super::group::Exponent;
use super::series::HahnSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Solved,
    Obstructed,
}

#[derive(Debug, Clone)]
pub struct ASCertificate<F: FiniteField> {
    pub outcome: Outcome,
    /// `s` with `s^p − s = b` up to the solution's precision (solved case).
    pub solution: Option<HahnSeries<F>>,
    /// Negative exponents outside `pΓ` that survive the reduction.
    pub obstruction_exponents: Vec<Exponent>,
    /// The reduced series `b − (d^p − d)`; its negative part sits on the
    /// obstruction exponents.
    pub reduced: HahnSeries<F>,
    /// The residue equation `e^p − e = c` has no root in the coefficient
    /// field, so the solution needs an unramified degree-`p` extension.
    pub residue_extension: bool,
}

/// Runs the reduction with the cutoff taken from `b` (its precision, or
/// `p` times its largest exponent when `b` is exact).
pub fn artin_schreier_reduce<F: FiniteField>(b: &HahnSeries<F>) -> Result<ASCertificate<F>> {
    artin_schreier_reduce_to(b, None)
}

pub fn artin_schreier_reduce_to<F: FiniteField>(b: &HahnSeries<F>, cutoff: Option<&Exponent>) -> Result<ASCertificate<F>> {
    let field = b.field().clone();
    let g = b.group().clone();
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::CharacteristicZero);
    }
    if let Some(pi) = b.precision() {
        if g.sign(pi)? != Ordering::Greater {
            return Err(Error::InsufficientPrecision { requested: "0".into(), available: pi.to_string() });
        }
    }
    let inv_p = BigRational::new(1.into(), BigUint::from(p).into());
    let mut work = b.clone();
    let mut shift = HahnSeries::zero(field.clone(), g.clone());
    let mut obstructions: Vec<Exponent> = Vec::new();
    loop {
        // smallest negative exponent not yet set aside
        let next = work
            .terms()
            .iter()
            .find(|(e, _)| !obstructions.contains(e))
            .filter(|(e, _)| matches!(g.sign(e), Ok(Ordering::Less)))
            .cloned();
        let Some((e, c)) = next else { break };
        if g.divisible_by(&e, p) {
            // d = c^{1/p} t^{e/p}: d^p − d = c t^e − d
            let d = HahnSeries::monomial(field.clone(), g.clone(), field.pth_root(&c), e.scale(&inv_p));
            work = work.sub(&d.frobenius()?.sub(&d)?)?;
            shift = shift.add(&d)?;
        } else {
            obstructions.push(e);
        }
    }
    if !obstructions.is_empty() {
        return Ok(ASCertificate {
            outcome: Outcome::Obstructed,
            solution: None,
            obstruction_exponents: obstructions,
            reduced: work,
            residue_extension: false,
        });
    }
    let (_, c0, positive) = work.split_at_zero()?;
    let (e0, residue_extension) = match solve_residue(&field, &c0) {
        Some(e0) => (e0, false),
        None => (field.zero(), true),
    };
    let limit = match (cutoff, work.precision()) {
        (Some(c), _) => c.clone(),
        (None, Some(pi)) => pi.clone(),
        (None, None) => match positive.terms().last() {
            Some((e, _)) => e.scale_int(p as i64),
            None => g.zero(),
        },
    };
    // X = −Σ w^{p^i} solves X^p − X = w for v(w) > 0
    let mut tail = HahnSeries::zero(field.clone(), g.clone());
    if !positive.is_known_zero() {
        let mut power = positive.clone();
        while !g.lt(&limit, &power.valuation()?)? {
            tail = tail.sub(&power)?;
            power = power.frobenius()?;
        }
        tail = tail.with_precision(power.valuation()?)?;
    }
    let mut solution = shift.add(&tail)?.add(&HahnSeries::constant(field.clone(), g.clone(), e0))?;
    if let Some(pi) = work.precision() {
        solution = solution.with_precision(pi.clone())?;
    }
    Ok(ASCertificate {
        outcome: Outcome::Solved,
        solution: Some(solution),
        obstruction_exponents: Vec::new(),
        reduced: work,
        residue_extension,
    })
}

/// A root of `e^p − e = c` in `F_q`, by solving the `F_p`-linear system on
/// the digit coordinates of [`FiniteField::index_of`].
pub fn solve_residue<F: FiniteField>(field: &F, c: &F::Elem) -> Option<F::Elem> {
    let p = field.characteristic();
    let k = field.degree() as usize;
    let digits = |x: &F::Elem| {
        let mut n = field.index_of(x);
        (0..k)
            .map(|_| {
                let d = n % p;
                n /= p;
                d
            })
            .collect::<Vec<u64>>()
    };
    let as_fn = |x: &F::Elem| field.sub(&field.frobenius_power(x, 1), x);
    let fp = PrimeField::new(p).ok()?;
    // augmented matrix rows: Σ_j L(basis_j)_i x_j = c_i
    let cols: Vec<Vec<u64>> = (0..k).map(|j| digits(&as_fn(&field.element(p.pow(j as u32))))).collect();
    let rhs = digits(c);
    let mut rows: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| cols[j][i]).chain([rhs[i]]).collect()).collect();
    let solution = solve_mod_p(&fp, &mut rows, k)?;
    let x = solution.iter().rev().fold(0u64, |acc, &d| acc * p + d);
    let e = field.element(x);
    (as_fn(&e) == *c).then_some(e)
}

/// Some solution of an augmented `n × (n+1)` system over `F_p`.
fn solve_mod_p(fp: &PrimeField, rows: &mut [Vec<u64>], n: usize) -> Option<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, piv);
        let inv = fp.inv(&rows[r][col])?;
        for x in rows[r].iter_mut() {
            *x = fp.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in 0..=n {
                    let t = fp.mul(&f, &rows[r][j]);
                    rows[i][j] = fp.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut x = vec![0; n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][n];
    }
    Some(x)
}
