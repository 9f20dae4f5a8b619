//! Newton–Hensel lifting of simple roots of series polynomials.

use crate::error::{Error, Result};
use crate::field::Field;

use super::group::Exponent;
use super::series::{poly_derivative, poly_eval, HahnSeries};

/// Root together with the residual valuations `v(P(b_i))` seen at each step
/// (the first entry belongs to the starting point).
#[derive(Debug, Clone)]
pub struct NewtonTrace<F: Field> {
    pub root: HahnSeries<F>,
    pub residuals: Vec<Exponent>,
}

const MAX_STEPS: usize = 256;

fn show(v: Option<&Exponent>) -> String {
    v.map_or_else(|| "+inf".to_string(), ToString::to_string)
}

/// Lifts `start` to `b` with `v(P(b)) > cutoff`.
pub fn newton_lift<F: Field>(poly: &[HahnSeries<F>], start: &HahnSeries<F>, cutoff: &Exponent) -> Result<HahnSeries<F>> {
    newton_lift_traced(poly, start, cutoff).map(|t| t.root)
}

pub fn newton_lift_traced<F: Field>(
    poly: &[HahnSeries<F>],
    start: &HahnSeries<F>,
    cutoff: &Exponent,
) -> Result<NewtonTrace<F>> {
    let g = start.group().clone();
    let dpoly = poly_derivative(poly);
    let mut b = start.clone();
    let mut residual = poly_eval(poly, &b)?;
    if residual.is_zero() {
        return Ok(NewtonTrace { root: b, residuals: Vec::new() });
    }
    let d0 = poly_eval(&dpoly, &b)?;
    let vr = residual.valuation_bound().expect("nonzero residual");
    let vd = if d0.is_known_zero() { None } else { Some(d0.valuation()?) };
    let hensel_ok = match &vd {
        Some(vd) => {
            let (twice, zero) = (vd.scale_int(2), g.zero());
            g.lt(g.max(&twice, &zero)?, &vr)?
        }
        None => false,
    };
    if !hensel_ok {
        return Err(Error::HenselFails { residual: vr.to_string(), derivative: show(vd.as_ref()) });
    }
    let vd = vd.expect("checked");
    // b only needs to be known above cutoff − v(P'), since P(b + ε) − P(b) ≈ P'(b)·ε
    let target = cutoff.sub(&vd);
    let mut residuals = vec![vr.clone()];
    let mut last = vr;
    for _ in 0..MAX_STEPS {
        if residual.is_zero() || g.lt(cutoff, &last)? {
            let root = match residual.valuation_bound() {
                Some(v) => b.with_precision(v.sub(&vd))?,
                None => b,
            };
            return Ok(NewtonTrace { root, residuals });
        }
        let d = poly_eval(&dpoly, &b)?;
        let dv = d.valuation()?;
        if dv != vd {
            return Err(Error::DerivativeDrift { before: vd.to_string(), after: dv.to_string() });
        }
        let inv = d.invert_to(&target.sub(&last))?;
        let step = residual.mul(&inv)?;
        b = b.sub(&step)?;
        residual = poly_eval(poly, &b)?;
        let next = match residual.valuation_bound() {
            Some(v) => v,
            None => {
                residuals.push(last.clone());
                continue;
            }
        };
        if !g.lt(&last, &next)? {
            return Err(Error::NoProgress { before: last.to_string(), after: next.to_string() });
        }
        residuals.push(next.clone());
        last = next;
    }
    Err(Error::CutoffUnreachable { deficit: cutoff.sub(&last).to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::hahn::ExponentGroup;

    #[test]
    fn square_root_of_one_plus_t_mod_3() {
        let f = PrimeField::new(3).unwrap();
        let g = ExponentGroup::integers();
        let e = |n| g.exponent_i64(&[n]).unwrap();
        let c = |terms: Vec<(i64, u64)>| HahnSeries::new(f, g.clone(), terms.into_iter().map(|(x, c)| (e(x), c)).collect(), None).unwrap();
        // X² − (1 + t)
        let poly = vec![c(vec![(0, 2), (1, 2)]), c(vec![]), c(vec![(0, 1)])];
        let t = newton_lift_traced(&poly, &c(vec![(0, 1)]), &e(3)).unwrap();
        let r = t.root;
        assert_eq!(r.coeff(&e(0)), 1);
        assert_eq!(r.coeff(&e(1)), 2);
        assert_eq!(r.coeff(&e(2)), 1);
        assert!(t.residuals.windows(2).all(|w| g.lt(&w[0], &w[1]).unwrap()));
        let res = poly_eval(&poly, &r).unwrap();
        assert!(g.lt(&e(3), &res.valuation_bound().unwrap()).unwrap());
    }

    #[test]
    fn exact_root_and_ramified_start() {
        let f = PrimeField::new(5).unwrap();
        let g = ExponentGroup::integers();
        let e = |n| g.exponent_i64(&[n]).unwrap();
        let one = HahnSeries::one(f, g.clone());
        let poly = vec![one.neg(), HahnSeries::zero(f, g.clone()), one.clone()];
        assert_eq!(newton_lift(&poly, &one, &e(5)).unwrap(), one);
        let t = HahnSeries::monomial(f, g.clone(), 1, e(1));
        let ramified = vec![t.neg(), HahnSeries::zero(f, g.clone()), one];
        let err = newton_lift(&ramified, &HahnSeries::zero(f, g.clone()), &e(3)).unwrap_err();
        assert!(matches!(err, Error::HenselFails { .. }));
    }
}
