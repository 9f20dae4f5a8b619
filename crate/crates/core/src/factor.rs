//! Factorization of integer polynomials into primitive irreducibles over `Q`.
//!
//! Squarefree parts are split by Zassenhaus: factor modulo a small prime,
//! Hensel-lift to a power exceeding twice the coefficient bound, then
//! recombine subsets of lifted factors by trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ffactor;
use crate::field::{PrimeField, Rationals};
use crate::intpoly::IntPoly;
use crate::poly::PolyRing;

const SPLIT_SEED: u64 = 0x5157_4d41;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Signed content: `g = content · Π f_i^{m_i}`.
    pub content: BigInt,
    /// Primitive irreducible factors with positive leading coefficient, in
    /// canonical order.
    pub factors: Vec<(IntPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        self.factors
            .iter()
            .fold(IntPoly::monomial(self.content.clone(), 0), |acc, (f, m)| &acc * &f.pow(*m as u32))
    }

    /// Number of irreducible factors counted with multiplicity.
    pub fn count_with_multiplicity(&self) -> usize {
        self.factors.iter().map(|(_, m)| m).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

pub fn factor(g: &IntPoly) -> Result<Factorization> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut content = g.content();
    if g.lc().is_negative() {
        content = -content;
    }
    let prim = g.primitive_part();
    let mut factors: Vec<(IntPoly, usize)> = Vec::new();
    let tz = prim.trailing_zeros();
    if tz > 0 {
        factors.push((IntPoly::from_i64(&[0, 1]), tz));
    }
    let rest = prim.shift_down(tz);
    for (s, m) in squarefree_over_q(&rest) {
        for f in zassenhaus(&s) {
            factors.push((f, m));
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Factorization { content, factors })
}

/// Yun's algorithm over `Q`; returns primitive squarefree parts.
pub fn squarefree_over_q(f: &IntPoly) -> Vec<(IntPoly, usize)> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let ring = PolyRing::new(Rationals);
    let a = f.to_rational();
    let da = ring.derivative(&a);
    let b = ring.gcd(&a, &da);
    let mut c = ring.div_rem(&a, &b).0;
    let mut d = ring.sub(&ring.div_rem(&da, &b).0, &ring.derivative(&c));
    let mut out = Vec::new();
    let mut i = 1;
    while ring.degree(&c).unwrap_or(0) > 0 {
        let g = ring.gcd(&c, &d);
        if ring.degree(&g).unwrap_or(0) > 0 {
            out.push((IntPoly::from_rational(&g), i));
        }
        c = ring.div_rem(&c, &g).0;
        d = ring.sub(&ring.div_rem(&d, &g).0, &ring.derivative(&c));
        i += 1;
    }
    out
}

fn reduce_mod(f: &IntPoly, field: &PrimeField) -> Vec<u64> {
    let ring = PolyRing::new(*field);
    ring.trim(f.coeffs().iter().map(|c| field.reduce(c)).collect())
}

/// Irreducible factors of a primitive squarefree polynomial with positive
/// leading coefficient.
fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return vec![f.clone()];
    }
    // pick the prime (among the first few admissible ones) with fewest modular factors
    let mut best: Option<(PrimeField, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 5 {
        p += 1;
        if !is_prime(p) {
            continue;
        }
        let field = PrimeField::new(p).unwrap();
        if field.reduce(&f.lc()) == 0 {
            continue;
        }
        let ring = PolyRing::new(field);
        let fp = reduce_mod(f, &field);
        if !ring.is_one(&ring.gcd(&fp, &ring.derivative(&fp))) {
            continue;
        }
        tried += 1;
        let (_, fs) = ffactor::factor(&ring, &fp, SPLIT_SEED);
        let modular: Vec<Vec<u64>> = fs.into_iter().map(|(g, _)| g).collect();
        if modular.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| modular.len() < b.len()) {
            best = Some((field, modular));
        }
    }
    let (field, modular) = best.unwrap();
    let p = field.modulus();

    // coefficient bound for any factor times the leading coefficient
    let norm2 = f.coeffs().iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b);
    let bound = (BigInt::one() << n) * (norm2.sqrt() + 1u32) * f.lc().abs();
    let target = bound * 2u32;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut a = 1u32;
    while modulus <= target {
        modulus *= &pb;
        a += 1;
    }
    let lifted = hensel_lift(f, &modular, field, a);
    recombine(f, &lifted, &modulus)
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2u32 > *m {
        r - m
    } else {
        r
    }
}

fn mul_mod_poly(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let p = &IntPoly::new(a.to_vec()) * &IntPoly::new(b.to_vec());
    p.coeffs().iter().map(|c| c.mod_floor(m)).collect()
}

fn recombine(f: &IntPoly, lifted: &[Vec<BigInt>], modulus: &BigInt) -> Vec<IntPoly> {
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        for subset in combinations(remaining.len(), size) {
            let lc = current.lc();
            let pick = |inside: bool| -> IntPoly {
                let mut acc = vec![lc.mod_floor(modulus)];
                for (pos, &idx) in remaining.iter().enumerate() {
                    if subset.contains(&pos) == inside {
                        acc = mul_mod_poly(&acc, &lifted[idx], modulus);
                    }
                }
                IntPoly::new(acc.iter().map(|c| symmetric(c, modulus)).collect()).primitive_part()
            };
            let g = pick(true);
            let h = pick(false);
            if &g * &h == current {
                out.push(g);
                current = h;
                remaining = remaining
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| !subset.contains(pos))
                    .map(|(_, &i)| i)
                    .collect();
                continue 'outer;
            }
        }
        size += 1;
    }
    out.push(current);
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Lifts `f ≡ lc(f)·Π g_i (mod p)` to monic factors modulo `p^a`.
fn hensel_lift(f: &IntPoly, modular: &[Vec<u64>], field: PrimeField, a: u32) -> Vec<Vec<BigInt>> {
    let m = BigInt::from(field.modulus()).pow(a);
    let mut target: Vec<BigInt> = f.coeffs().iter().map(|c| c.mod_floor(&m)).collect();
    let ring = PolyRing::new(field);
    let mut out = Vec::new();
    for (i, g0) in modular.iter().enumerate() {
        if i + 1 == modular.len() {
            // remaining target is lc·g_last; make it monic
            let lc = target.last().unwrap().clone();
            let inv = lc.modinv(&m).expect("leading coefficient is a unit");
            out.push(target.iter().map(|c| (c * &inv).mod_floor(&m)).collect());
            break;
        }
        let rest = modular[i + 1..]
            .iter()
            .fold(ring.constant(field.reduce(target.last().unwrap())), |acc, g| ring.mul(&acc, g));
        let (g, h) = lift_pair(&target, g0, &rest, field, a);
        out.push(g);
        target = IntPoly::new(h).into_coeffs();
    }
    out
}

/// Linear two-factor Hensel lifting of `target ≡ g0·h0 (mod p)` to `p^a`,
/// keeping the first factor monic.
fn lift_pair(
    target: &[BigInt],
    g0: &[u64],
    h0: &[u64],
    field: PrimeField,
    a: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let ring = PolyRing::new(field);
    let p = BigInt::from(field.modulus());
    let (one, s, t) = ring.xgcd(g0, h0);
    debug_assert!(ring.is_one(&one));
    let to_big = |v: &[u64]| -> Vec<BigInt> { v.iter().map(|&c| BigInt::from(c)).collect() };
    let mut g = to_big(g0);
    let mut h = to_big(h0);
    let mut pk = p.clone();
    for _ in 1..a {
        let next = &pk * &p;
        let prod = &IntPoly::new(g.clone()) * &IntPoly::new(h.clone());
        let n = target.len().max(prod.coeffs().len());
        let e: Vec<u64> = (0..n)
            .map(|i| {
                let ti = target.get(i).cloned().unwrap_or_default();
                let d = (ti - prod.coeff(i)).mod_floor(&next);
                debug_assert!((&d % &pk).is_zero());
                (d / &pk).mod_floor(&p).to_u64().unwrap()
            })
            .collect();
        let c = ring.trim(e);
        let (q, r) = ring.div_rem(&ring.mul(&t, &c), g0);
        let u = ring.add(&ring.mul(&s, &c), &ring.mul(&q, h0));
        let add_scaled = |base: &mut Vec<BigInt>, delta: &[u64]| {
            if base.len() < delta.len() {
                base.resize(delta.len(), BigInt::zero());
            }
            for (b, &d) in base.iter_mut().zip(delta) {
                *b = (&*b + &pk * d).mod_floor(&next);
            }
        };
        add_scaled(&mut g, &r);
        add_scaled(&mut h, &u);
        pk = next;
    }
    (g, h)
}

/// Whether an integer polynomial is irreducible over `Q` (constants are not).
pub fn is_irreducible(g: &IntPoly) -> Result<bool> {
    if g.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let f = factor(g)?;
    Ok(f.is_irreducible())
}

/// Rational roots of an integer polynomial.
pub fn rational_roots(g: &IntPoly) -> Result<Vec<BigRational>> {
    let f = factor(g)?;
    Ok(f.factors
        .iter()
        .filter(|(h, _)| h.degree() == Some(1))
        .map(|(h, _)| BigRational::new(-h.coeff(0), h.coeff(1)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> IntPoly {
        IntPoly::from_i64(v)
    }

    #[test]
    fn difference_of_squares() {
        let f = factor(&p(&[-9, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(p(&[-3, 1]), 1), (p(&[3, 1]), 1)]);
        assert_eq!(f.content, BigInt::one());
    }

    #[test]
    fn cyclotomic_split_and_content() {
        let f = factor(&p(&[-1, 0, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1, 1]), 1)]);
        let g = factor(&p(&[4, -4])).unwrap();
        assert_eq!(g.content, BigInt::from(-4));
        assert_eq!(g.factors, vec![(p(&[-1, 1]), 1)]);
    }

    #[test]
    fn golden_is_irreducible() {
        let f = factor(&p(&[-1, -1, 1])).unwrap();
        assert!(f.is_irreducible());
    }

    #[test]
    fn swinnerton_dyer_like_recombination() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits modulo every prime
        let f = factor(&p(&[1, 0, -10, 0, 1])).unwrap();
        assert!(f.is_irreducible());
        // (x^2 - 2)(x^2 - 3)(2x + 1)^2 x^3
        let g = &(&p(&[-2, 0, 1]) * &p(&[-3, 0, 1])) * &(&p(&[1, 2]).pow(2) * &p(&[0, 0, 0, 1]));
        let fg = factor(&g).unwrap();
        assert_eq!(fg.expand(), g);
        assert_eq!(
            fg.factors,
            vec![(p(&[0, 1]), 3), (p(&[1, 2]), 2), (p(&[-3, 0, 1]), 1), (p(&[-2, 0, 1]), 1)]
        );
    }

    #[test]
    fn zero_is_an_error() {
        assert_eq!(factor(&IntPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}
