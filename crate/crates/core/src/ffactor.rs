//! Factorization of polynomials over finite fields: squarefree
//! decomposition, distinct-degree splitting and Cantor–Zassenhaus.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::factor_u64;
use crate::field::FiniteField;
use crate::poly::{Poly, PolyRing};

/// Rabin's test. Constants are not irreducible.
pub fn is_irreducible<F: FiniteField>(ring: &PolyRing<F>, f: &[F::Elem]) -> bool {
    let n = match ring.degree(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = ring.monic(f);
    let x = ring.x();
    let q = ring.field().order();
    let frob_iter = |times: usize| -> Poly<F> {
        let mut h = x.clone();
        for _ in 0..times {
            h = ring.pow_mod(&h, &BigUint::from(q), &f);
        }
        h
    };
    if ring.sub(&frob_iter(n), &x).iter().any(|c| !ring.field().is_zero(c)) {
        return false;
    }
    for (r, _) in factor_u64(n as u64) {
        let h = frob_iter(n / r as usize);
        let g = ring.gcd(&ring.sub(&h, &x), &f);
        if !ring.is_one(&g) {
            return false;
        }
    }
    true
}

/// Squarefree decomposition of a monic polynomial: pairs `(s_i, i)` with
/// `f = Π s_i^i`, each `s_i` monic squarefree and pairwise coprime.
pub fn squarefree_decomposition<F: FiniteField>(
    ring: &PolyRing<F>,
    f: &[F::Elem],
) -> Vec<(Poly<F>, usize)> {
    let mut out = Vec::new();
    sqf_rec(ring, &ring.monic(f), 1, &mut out);
    out.sort_by_key(|a| a.1);
    out
}

fn sqf_rec<F: FiniteField>(
    ring: &PolyRing<F>,
    f: &[F::Elem],
    mult: usize,
    out: &mut Vec<(Poly<F>, usize)>,
) {
    if ring.degree(f).unwrap_or(0) == 0 {
        return;
    }
    let p = ring.field().characteristic() as usize;
    let mut c = ring.gcd(f, &ring.derivative(f));
    let mut w = ring.div_rem(f, &c).0;
    let mut i = 1;
    while !ring.is_one(&w) {
        let y = ring.gcd(&w, &c);
        let fac = ring.div_rem(&w, &y).0;
        if !ring.is_one(&fac) {
            out.push((fac, i * mult));
        }
        w = y;
        c = ring.div_rem(&c, &w).0;
        i += 1;
    }
    if !ring.is_one(&c) {
        // c is a polynomial in x^p
        let field = ring.field();
        let root: Vec<F::Elem> = c.iter().step_by(p).map(|a| field.pth_root(a)).collect();
        sqf_rec(ring, &ring.trim(root), mult * p, out);
    }
}

/// Splits a monic squarefree polynomial into products of irreducibles of
/// equal degree: pairs `(g, d)` with every irreducible factor of `g` of degree `d`.
pub fn distinct_degree<F: FiniteField>(ring: &PolyRing<F>, f: &[F::Elem]) -> Vec<(Poly<F>, usize)> {
    let mut out = Vec::new();
    let q = BigUint::from(ring.field().order());
    let x = ring.x();
    let mut rest = ring.monic(f);
    let mut h = ring.rem(&x, &rest);
    let mut d = 1;
    while ring.degree(&rest).unwrap_or(0) >= 2 * d {
        h = ring.pow_mod(&h, &q, &rest);
        let g = ring.gcd(&rest, &ring.sub(&h, &x));
        if !ring.is_one(&g) {
            rest = ring.div_rem(&rest, &g).0;
            h = ring.rem(&h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(n) = ring.degree(&rest).filter(|&n| n > 0) {
        out.push((rest, n));
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting.
pub fn equal_degree<F: FiniteField>(
    ring: &PolyRing<F>,
    f: &[F::Elem],
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly<F>> {
    let n = ring.degree(f).unwrap_or(0);
    if n <= d {
        return vec![ring.monic(f)];
    }
    let field = ring.field();
    let q = field.order();
    let count = n / d;
    let mut factors = vec![ring.monic(f)];
    while factors.len() < count {
        let a: Poly<F> = ring.trim((0..n).map(|_| field.random(rng)).collect());
        if a.is_empty() {
            continue;
        }
        let b = if q % 2 == 1 {
            let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            ring.sub(&ring.pow_mod(&a, &e, f), &ring.one())
        } else {
            // absolute trace to F_2
            let k = field.degree() as usize;
            let mut t = ring.rem(&a, f);
            let mut acc = t.clone();
            for _ in 1..k * d {
                t = ring.rem(&ring.mul(&t, &t), f);
                acc = ring.add(&acc, &t);
            }
            acc
        };
        let mut next = Vec::with_capacity(factors.len() + 1);
        for u in factors {
            if ring.degree(&u).unwrap() > d {
                let g = ring.gcd(&u, &b);
                let dg = ring.degree(&g).unwrap_or(0);
                if dg > 0 && dg < ring.degree(&u).unwrap() {
                    let h = ring.div_rem(&u, &g).0;
                    next.push(g);
                    next.push(ring.monic(&h));
                    continue;
                }
            }
            next.push(u);
        }
        factors = next;
    }
    factors
}

/// Full factorization: leading coefficient and monic irreducible factors
/// with multiplicities, sorted by degree and then by coefficient indices.
pub fn factor<F: FiniteField>(
    ring: &PolyRing<F>,
    f: &[F::Elem],
    seed: u64,
) -> (F::Elem, Vec<(Poly<F>, usize)>) {
    let lc = ring.lc(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (s, m) in squarefree_decomposition(ring, f) {
        for (g, d) in distinct_degree(ring, &s) {
            for h in equal_degree(ring, &g, d, &mut rng) {
                out.push((h, m));
            }
        }
    }
    let field = ring.field();
    out.sort_by(|a, b| {
        a.0.len().cmp(&b.0.len()).then_with(|| {
            let ka: Vec<u64> = a.0.iter().map(|c| field.index_of(c)).collect();
            let kb: Vec<u64> = b.0.iter().map(|c| field.index_of(c)).collect();
            ka.cmp(&kb)
        })
    });
    (lc, out)
}
