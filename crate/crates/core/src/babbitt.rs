//! σ-stability of finite extensions: `K[T]/(P)` is σ-stable when it holds
//! `deg P` roots of `P^σ`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffactor::{factor, is_irreducible, squarefree_decomposition};
use crate::field::{Field, FiniteField};
use crate::poly::{Poly, PolyRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SigmaStabilityResult {
    pub stable: bool,
    pub root_count: usize,
    pub degree: usize,
}

/// `P` irreducible over `F_q`, `σ = Frob_p^e` on coefficients. Counts the
/// roots of `P^σ` in `F_{q^d}` as `deg gcd(P^σ, T^{q^d} − T)`.
pub fn babbitt_finite<F: FiniteField>(field: &F, poly: &[F::Elem], e: u32) -> Result<SigmaStabilityResult> {
    let ring = PolyRing::new(field.clone());
    let poly = ring.trim(poly.to_vec());
    if !is_irreducible(&ring, &poly) {
        return Err(Error::Reducible);
    }
    let d = ring.degree(&poly).expect("irreducible is nonzero");
    let sigma_p = ring.map_coeffs(&poly, |c| field.frobenius_power(c, e));
    let exponent = BigUint::from(field.order()).pow(d as u32);
    let frob = ring.pow_mod(&ring.x(), &exponent, &sigma_p);
    let g = ring.gcd(&sigma_p, &ring.sub(&frob, &ring.x()));
    let root_count = ring.degree(&g).unwrap_or(0);
    Ok(SigmaStabilityResult { stable: root_count == d, root_count, degree: d })
}

/// `x ↦ c·x^d` on `F_q(x)`, composed with `Frob_p^e` on coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialMap<E> {
    pub c: E,
    pub d: u32,
    pub frobenius: u32,
}

impl<E: Clone> MonomialMap<E> {
    pub fn apply<F: Field<Elem = E>>(&self, ring: &PolyRing<F>, h: &[E]) -> Poly<F> {
        let field = ring.field();
        let inner = ring.monomial(self.c.clone(), self.d as usize);
        h.iter().rev().fold(Vec::new(), |acc, a| ring.add(&ring.mul(&acc, &inner), &[field.frobenius_power(a, self.frobenius)]))
    }
}

/// Whether a nonzero polynomial is a square in `F_q[x]` (`q` odd).
pub fn is_square_poly<F: FiniteField>(ring: &PolyRing<F>, h: &[F::Elem]) -> bool {
    let field = ring.field();
    let (lc, factors) = factor(ring, h, 0);
    let half = BigUint::from((field.order() - 1) / 2);
    factors.iter().all(|(_, m)| m % 2 == 0) && field.is_one(&field.pow(&lc, &half))
}

fn is_squarefree<F: FiniteField>(ring: &PolyRing<F>, h: &[F::Elem]) -> bool {
    ring.degree(h) == Some(0) || squarefree_decomposition(ring, h).iter().all(|(s, m)| *m == 1 || ring.degree(s) == Some(0))
}

/// `L = F_q(x)(√g)` with `g = num/den`. `L` is σ-stable iff `σ(g)` is a
/// square in `L`, i.e. `σ(g) ∈ K²` or `σ(g) ∈ g·K²`.
pub fn babbitt_quadratic_function_field<F: FiniteField>(
    field: &F,
    num: &[F::Elem],
    den: &[F::Elem],
    sigma: &MonomialMap<F::Elem>,
) -> Result<SigmaStabilityResult> {
    if field.characteristic() == 2 {
        return Err(Error::WildQuadratic);
    }
    let ring = PolyRing::new(field.clone());
    let (num, den) = (ring.trim(num.to_vec()), ring.trim(den.to_vec()));
    if num.is_empty() || den.is_empty() {
        return Err(Error::Invalid("g must be a nonzero rational function".into()));
    }
    if sigma.d == 0 || field.is_zero(&sigma.c) {
        return Err(Error::Invalid("σ must send x to c·x^d with c ≠ 0 and d ≥ 1".into()));
    }
    if !is_squarefree(&ring, &num) || !is_squarefree(&ring, &den) || ring.degree(&ring.gcd(&num, &den)) != Some(0) {
        return Err(Error::NotSquarefree);
    }
    let g = ring.mul(&num, &den);
    if is_square_poly(&ring, &g) {
        return Err(Error::Invalid("g is a square, so the extension is trivial".into()));
    }
    let (sn, sd) = (sigma.apply(&ring, &num), sigma.apply(&ring, &den));
    let sigma_g = ring.mul(&sn, &sd);
    let stable = is_square_poly(&ring, &sigma_g) || is_square_poly(&ring, &ring.mul(&sigma_g, &g));
    Ok(SigmaStabilityResult { stable, root_count: if stable { 2 } else { 0 }, degree: 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, PrimeField};

    #[test]
    fn finite_examples() {
        let f4 = GaloisField::new(2, 2).unwrap();
        let w = f4.generator();
        let p = vec![w, f4.one(), f4.one()];
        let r = babbitt_finite(&f4, &p, 1).unwrap();
        assert_eq!((r.root_count, r.stable), (2, true));
        let f2 = PrimeField::new(2).unwrap();
        assert!(babbitt_finite(&f2, &[1, 1, 1], 0).unwrap().stable);
        assert_eq!(babbitt_finite(&f2, &[1, 0, 1], 0), Err(Error::Reducible));
        assert!(babbitt_finite(&f2, &[1, 1], 1).unwrap().stable);
    }

    #[test]
    fn quadratic_examples() {
        let f3 = PrimeField::new(3).unwrap();
        let square = MonomialMap { c: 1, d: 2, frobenius: 0 };
        assert!(babbitt_quadratic_function_field(&f3, &[0, 1], &[1], &square).unwrap().stable);
        assert!(!babbitt_quadratic_function_field(&f3, &[1, 1], &[1], &square).unwrap().stable);
        let id = MonomialMap { c: 1, d: 1, frobenius: 0 };
        assert!(babbitt_quadratic_function_field(&f3, &[0, 1], &[1], &id).unwrap().stable);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(babbitt_quadratic_function_field(&f2, &[0, 1], &[1], &id), Err(Error::WildQuadratic));
        assert_eq!(babbitt_quadratic_function_field(&f3, &[0, 0, 1], &[1], &id), Err(Error::NotSquarefree));
    }
}
