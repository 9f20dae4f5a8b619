//! Cyclotomic polynomials and root-of-unity detection.

use crate::arith::euler_phi;
use crate::error::{Error, Result};
use crate::factor;
use crate::intpoly::IntPoly;

/// `Φ_k`, computed as `(T^k − 1) / Π_{d | k, d < k} Φ_d`.
pub fn cyclotomic(k: u64) -> IntPoly {
    assert!(k >= 1, "cyclotomic index must be positive");
    let mut num = IntPoly::monomial(1.into(), k as usize);
    num = &num - &IntPoly::one();
    for d in 1..k {
        if k.is_multiple_of(d) {
            num = num.exact_div(&cyclotomic(d)).expect("Φ_d divides T^k - 1");
        }
    }
    num
}

/// Every `k` with `φ(k) = d`. Since `φ(k) ≥ √(k/2)`, the search stops at `2d²`.
pub fn indices_with_phi(d: u64) -> Vec<u64> {
    (1..=(2 * d * d).max(2)).filter(|&k| euler_phi(k) == d).collect()
}

/// Every `k` with `φ(k) ≤ n`.
pub fn indices_with_phi_at_most(n: u64) -> Vec<u64> {
    (1..=(2 * n * n).max(2)).filter(|&k| euler_phi(k) <= n).collect()
}

/// Returns `k` iff `g = ±Φ_k`. The input must be irreducible.
pub fn is_cyclotomic(g: &IntPoly) -> Result<Option<u64>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !factor::is_irreducible(g)? {
        return Err(Error::Reducible);
    }
    Ok(match_cyclotomic(&g.primitive_part()))
}

/// Comparison against `Φ_k` for all `k` with `φ(k) = deg g`, without the
/// irreducibility check. `g` must be primitive with positive leading coefficient.
pub(crate) fn match_cyclotomic(g: &IntPoly) -> Option<u64> {
    let d = g.degree()? as u64;
    if d == 0 {
        return None;
    }
    indices_with_phi(d).into_iter().find(|&k| cyclotomic(k) == *g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> IntPoly {
        IntPoly::from_i64(v)
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic(105).coeffs().iter().any(|c| *c == (-2).into()));
    }

    #[test]
    fn detection() {
        assert_eq!(is_cyclotomic(&p(&[1, 1, 1])).unwrap(), Some(3));
        assert_eq!(is_cyclotomic(&p(&[-1, 1])).unwrap(), Some(1));
        assert_eq!(is_cyclotomic(&p(&[-1, -1, 1])).unwrap(), None);
        assert_eq!(is_cyclotomic(&p(&[-1, 0, 1])), Err(Error::Reducible));
    }

    #[test]
    fn golden_compared_against_all_degree_two() {
        // the only k with φ(k) = 2 are 3, 4, 6
        assert_eq!(indices_with_phi(2), vec![3, 4, 6]);
        for k in [3, 4, 6] {
            assert_ne!(cyclotomic(k), p(&[-1, -1, 1]));
        }
        assert_eq!(indices_with_phi_at_most(2), vec![1, 2, 3, 4, 6]);
    }
}
