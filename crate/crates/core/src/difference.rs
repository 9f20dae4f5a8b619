//! Decision procedures for difference equations over `Z[σ, σ⁻¹]`.
//!
//! A factor `q` of the normalized equation is *non-modular* for `p` when it
//! divides some `T^m − p^ℓ` with `m ≥ 1`. For `α` a root of `q` of degree `d`
//! and `|q(0)/lc(q)| = p^u`, this happens exactly when `β = α^d / p^u` is a
//! root of unity: `α^m = p^ℓ` forces every conjugate to have modulus
//! `p^{ℓ/m}`, so `p^u = p^{dℓ/m}` and `β^m = 1`; conversely `β^k = 1` gives
//! `α^{dk} = p^{uk}`. The minimal polynomial data of `β` comes from the
//! characteristic polynomial of `C_q^d / p^u`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{is_prime, rational_p_power, rational_pow};
use crate::cyclotomic::{self, match_cyclotomic};
use crate::error::{Error, Result};
use crate::euclid::{smith_normal_form, Smith};
use crate::factor::{self, squarefree_over_q};
use crate::field::Rationals;
use crate::intpoly::IntPoly;
use crate::laurent::LaurentPoly;
use crate::matrix::Matrix;
use crate::poly::PolyRing;
use crate::{DiffMatrix, IntLaurent, IntMatrix, RatLaurent, RatMatrix};

/// Verdict for one irreducible factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorVerdict {
    #[serde(serialize_with = "ser_display")]
    pub factor: IntPoly,
    pub multiplicity: usize,
    /// Minimal `(m, ℓ)` with `factor | T^m − p^ℓ`.
    pub witness: Option<(u64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularityVerdict {
    pub modular: bool,
    pub witnesses: Vec<(u64, i64)>,
    pub per_factor: Vec<FactorVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub invariant_factors: Vec<IntLaurent>,
    /// `None` when `det F = 0`, i.e. the subgroup has infinite rank.
    pub trdeg: Option<u64>,
    #[serde(serialize_with = "ser_display")]
    pub content: BigInt,
    /// Necessary for connectedness; not sufficient.
    pub connected_necessary: bool,
    pub ev_su_upper: usize,
    pub c_minimal: bool,
    pub modularity: ModularityVerdict,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub fn check_p(p: u64) -> Result<()> {
    if p == 0 || is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrimeOrZero(p))
    }
}

pub fn normalize(f: &IntLaurent) -> Result<(i64, IntPoly)> {
    f.normalize()
}

/// Primitive irreducible factors in canonical order. The content is dropped.
pub fn factor_rational(g: &IntPoly) -> Result<Vec<(IntPoly, usize)>> {
    Ok(factor::factor(g)?.factors)
}

pub fn is_cyclotomic(g: &IntPoly) -> Result<Option<u64>> {
    cyclotomic::is_cyclotomic(g)
}

pub fn is_modular(f: &IntLaurent, p: u64) -> Result<ModularityVerdict> {
    check_p(p)?;
    let (_, g) = f.normalize()?;
    let factors = if g.degree() == Some(0) { Vec::new() } else { factor_rational(&g)? };
    let per_factor: Vec<FactorVerdict> = factors
        .into_iter()
        .map(|(q, mult)| {
            let witness = factor_witness(&q, p);
            FactorVerdict { factor: q, multiplicity: mult, witness }
        })
        .collect();
    let witnesses: Vec<(u64, i64)> = per_factor.iter().filter_map(|v| v.witness).collect();
    Ok(ModularityVerdict { modular: witnesses.is_empty(), witnesses, per_factor })
}

/// Minimal `(m, ℓ)` such that the irreducible primitive `q` divides `T^m − p^ℓ`.
fn factor_witness(q: &IntPoly, p: u64) -> Option<(u64, i64)> {
    let d = q.degree()? as u64;
    let c = BigRational::new(q.coeff(0), q.lc()).abs();
    if p == 0 || c.is_one() {
        return match_cyclotomic(q).map(|k| (k, 0));
    }
    let u = rational_p_power(&c, p)?;
    let k = beta_root_of_unity_order(q, p, u)?;
    minimal_witness(q, p, u, d * k)
}

/// Smallest order `k` of a root of unity among the `α^d / p^u`, if any.
fn beta_root_of_unity_order(q: &IntPoly, p: u64, u: i64) -> Option<u64> {
    let d = q.degree()? as u32;
    let comp = companion_of(q);
    let scaled = comp.pow(d).scale(&rational_pow(p, -u));
    let h = IntPoly::from_rational(&scaled.charpoly());
    let mut best: Option<u64> = None;
    for (part, _) in squarefree_over_q(&h) {
        if let Ok(fz) = factor::factor(&part) {
            for (g, _) in fz.factors {
                if let Some(k) = match_cyclotomic(&g) {
                    best = Some(best.map_or(k, |b| b.min(k)));
                }
            }
        }
    }
    best
}

/// Scans `m = 1..=bound` for `q | T^m − p^{um/d}`; `bound` is known to succeed.
fn minimal_witness(q: &IntPoly, p: u64, u: i64, bound: u64) -> Option<(u64, i64)> {
    let d = q.degree()? as i64;
    let ring = PolyRing::new(Rationals);
    let modulus = q.to_rational();
    let x = ring.rem(&ring.x(), &modulus);
    let mut power = ring.one();
    for m in 1..=bound {
        power = ring.rem(&ring.mul(&power, &x), &modulus);
        let num = u * m as i64;
        if num % d != 0 {
            continue;
        }
        let ell = num / d;
        let target = ring.constant(rational_pow(p, ell));
        if ring.trim(power.clone()) == ring.trim(target) {
            return Some((m, ell));
        }
    }
    None
}

/// Smith form over `Q[σ, σ⁻¹]`, diagonal normalized to primitive integer
/// Laurent polynomials with lowest exponent 0 and positive leading coefficient.
pub fn smith_form(f: &DiffMatrix) -> Result<Smith<RatLaurent>> {
    f.require_square()?;
    Ok(smith_normal_form(&f.map(IntLaurent::to_rational)))
}

pub fn classify(f: &DiffMatrix, p: u64) -> Result<ClassifyReport> {
    check_p(p)?;
    let smith = smith_form(f)?;
    let invariant_factors: Vec<IntLaurent> = smith.diagonal().iter().map(RatLaurent::integer_associate).collect();
    let det = f.determinant();
    let finite = !det.is_zero();
    let trdeg = finite.then(|| invariant_factors.iter().filter_map(|g| g.span()).sum());
    let content = if finite { det.content() } else { BigInt::zero() };
    let product = invariant_factors
        .iter()
        .filter(|g| !g.is_zero())
        .fold(IntLaurent::one(), |acc, g| &acc * g);
    let ev_su_upper = match product.normalize()? {
        (_, g) if g.degree() == Some(0) => 0,
        (_, g) => factor::factor(&g)?.count_with_multiplicity(),
    };
    let modularity = is_modular(&product, p)?;
    Ok(ClassifyReport {
        invariant_factors,
        trdeg,
        connected_necessary: content.is_one(),
        content,
        ev_su_upper,
        c_minimal: ev_su_upper == 1,
        modularity,
    })
}

/// Unchecked companion matrix of a nonconstant polynomial.
pub fn companion_of(g: &IntPoly) -> RatMatrix {
    let n = g.degree().unwrap_or(0);
    let lc = BigRational::from_integer(g.lc());
    Matrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -BigRational::from_integer(g.coeff(i)) / &lc
        } else if i == j + 1 {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    })
}

/// Companion matrix with subdiagonal ones and last column `−d_i/d_n`, so that
/// its characteristic polynomial is `f / d_n` after removing powers of `σ`.
pub fn companion_matrix(f: &IntLaurent) -> Result<RatMatrix> {
    let (_, g) = f.normalize()?;
    if g.degree() == Some(0) {
        return Err(Error::ConstantEquation);
    }
    let a = companion_of(&g);
    let lc = BigRational::from_integer(g.lc());
    let scaled: Vec<BigRational> = a.charpoly().into_iter().map(|c| c * &lc).collect();
    if scaled != g.to_rational() {
        return Err(Error::Mismatch);
    }
    Ok(a)
}

/// Characteristic polynomial `det(σI − M)` of an invertible integer matrix.
pub fn dynamics_charpoly(m: &IntMatrix) -> Result<IntLaurent> {
    m.require_square()?;
    let cp = m.charpoly();
    if cp[0].is_zero() {
        return Err(Error::Singular);
    }
    Ok(LaurentPoly::from_dense(0, &cp))
}

/// True iff no `Φ_k` with `φ(k) ≤ n` divides the characteristic polynomial.
pub fn no_root_of_unity(m: &IntMatrix) -> Result<bool> {
    let cp = dynamics_charpoly(m)?;
    let (_, g) = cp.normalize()?;
    let n = m.rows() as u64;
    Ok(cyclotomic::indices_with_phi_at_most(n)
        .into_iter()
        .all(|k| g.exact_div(&cyclotomic::cyclotomic(k)).is_none()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> IntLaurent {
        IntLaurent::from_i64(t)
    }

    #[test]
    fn modular_examples() {
        for p in [0, 2, 3, 5] {
            let v = is_modular(&lp(&[(0, -1), (1, 1)]), p).unwrap();
            assert_eq!(v.witnesses, vec![(1, 0)]);
        }
        let v = is_modular(&lp(&[(0, -2), (1, 1)]), 2).unwrap();
        assert_eq!(v.witnesses, vec![(1, 1)]);
        assert!(is_modular(&lp(&[(0, -2), (1, 3)]), 2).unwrap().modular);
        assert!(is_modular(&lp(&[(0, -1), (1, -1), (2, 1)]), 5).unwrap().modular);
        assert_eq!(is_modular(&lp(&[(0, 1)]), 4), Err(Error::NotPrimeOrZero(4)));
    }

    #[test]
    fn witness_is_minimal_beyond_naive_reduction() {
        // α² = −2, so α⁴ = 4 while α² ≠ ±2 as an equation T² − 2
        let v = is_modular(&lp(&[(0, 2), (2, 1)]), 2).unwrap();
        assert_eq!(v.witnesses, vec![(4, 2)]);
        // 2σ − 1: α = 1/2 = 2^{-1}
        let v = is_modular(&lp(&[(0, -1), (1, 2)]), 2).unwrap();
        assert_eq!(v.witnesses, vec![(1, -1)]);
    }

    #[test]
    fn classify_examples() {
        let one = |f: IntLaurent| Matrix::from_rows(vec![vec![f]]).unwrap();
        let r = classify(&one(lp(&[(0, -2), (1, 3)])), 2).unwrap();
        assert_eq!((r.trdeg, r.ev_su_upper, r.c_minimal, r.modularity.modular), (Some(1), 1, true, true));
        let r = classify(&one(lp(&[(0, -1), (2, 1)])), 3).unwrap();
        assert_eq!(r.ev_su_upper, 2);
        assert_eq!(r.modularity.witnesses, vec![(1, 0), (2, 0)]);
        let r = classify(&one(lp(&[(0, -2), (1, 2)])), 3).unwrap();
        assert_eq!(r.content, BigInt::from(2));
        assert!(!r.connected_necessary);
    }

    #[test]
    fn smith_examples() {
        let s = lp(&[(1, 1)]);
        let f = Matrix::from_rows(vec![vec![s.clone(), lp(&[(0, 1)])], vec![IntLaurent::zero(), s]]).unwrap();
        let sm = smith_form(&f).unwrap();
        let diag: Vec<IntLaurent> = sm.diagonal().iter().map(RatLaurent::integer_associate).collect();
        // det = σ² is a unit of the Laurent ring, so both factors normalize to 1
        assert_eq!(diag, vec![lp(&[(0, 1)]), lp(&[(0, 1)])]);
        let det = sm.d.determinant();
        assert!(det.is_monomial());
        assert_eq!(sm.u.mul(&f.map(IntLaurent::to_rational)).mul(&sm.v), sm.d);
    }

    #[test]
    fn companion_examples() {
        let a = companion_matrix(&lp(&[(0, -1), (1, -1), (2, 1)])).unwrap();
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(a.to_rows(), vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]]);
        let a = companion_matrix(&lp(&[(0, -2), (2, 3)])).unwrap();
        assert_eq!(a.to_rows(), vec![vec![q(0, 1), q(2, 3)], vec![q(1, 1), q(0, 1)]]);
        assert_eq!(companion_matrix(&lp(&[(3, 5)])), Err(Error::ConstantEquation));
    }

    #[test]
    fn dynamics() {
        let m = |rows: &[&[i64]]| -> IntMatrix {
            Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
        };
        let cat = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(dynamics_charpoly(&cat).unwrap(), lp(&[(0, 1), (1, -3), (2, 1)]));
        assert!(no_root_of_unity(&cat).unwrap());
        assert!(!no_root_of_unity(&m(&[&[1, 0], &[0, 1]])).unwrap());
        assert!(!no_root_of_unity(&m(&[&[0, -1], &[1, 0]])).unwrap());
        assert_eq!(dynamics_charpoly(&m(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }
}
