//! Cokernels of difference operators on the `n`-torsion of a split torus.
//!
//! On `A = G_m^k` the `n`-torsion is `(Z/nZ)^k` and `σ` acts on roots of
//! unity through a unit `s`, so a difference matrix becomes an integer matrix
//! mod `n`. Everything is computed from Smith forms of integer lifts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::inv_mod;
use crate::error::{Error, Result};
use crate::euclid::{smith_normal_form, Smith};
use crate::{DiffMatrix, IntMatrix};

/// Largest modulus whose square still fits comfortably in `i64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorsionModule {
    pub n: u64,
    pub k: usize,
}

impl TorsionModule {
    pub fn new(n: u64, k: usize) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&n) {
            return Err(Error::Invalid(format!("torsion modulus must lie in 2..={MAX_MODULUS}, got {n}")));
        }
        if k == 0 {
            return Err(Error::Invalid("torsion rank must be positive".into()));
        }
        Ok(TorsionModule { n, k })
    }

    /// All elements of `(Z/nZ)^k` in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let total = self.n.pow(self.k as u32);
        (0..total).map(move |mut idx| {
            (0..self.k)
                .map(|_| {
                    let c = idx % self.n;
                    idx /= self.n;
                    c
                })
                .collect()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionEndo {
    pub base: TorsionModule,
    pub s: u64,
    /// Entries in `0..n`.
    pub matrix: Vec<Vec<u64>>,
    /// The same substitution modulo `n²`, acting on `A[n²]`.
    pub lift: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientStructure {
    pub elementary_divisors: Vec<u64>,
    pub order: u64,
    pub kernel_order: u64,
    pub index_equals_kernel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    pub n: u64,
    pub s: u64,
    pub elementary_divisors: Vec<u64>,
    pub order: u64,
    pub index_equals_kernel: bool,
}

/// A coset of `f(A[n])` in `A[n]`, as coordinates in `⊕ Z/d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Coset {
    pub coords: Vec<u64>,
    pub divisors: Vec<u64>,
}

impl Coset {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &Coset) -> Coset {
        let coords = self.coords.iter().zip(&o.coords).zip(&self.divisors).map(|((a, b), d)| (a + b) % d).collect();
        Coset { coords, divisors: self.divisors.clone() }
    }
}

fn substitute(f: &DiffMatrix, s: u64, s_inv: u64, m: u64) -> Vec<Vec<u64>> {
    let (s, s_inv, m) = (s as i64, s_inv as i64, m as i64);
    f.to_rows()
        .iter()
        .map(|row| row.iter().map(|e| e.eval_mod(s, s_inv, m) as u64).collect())
        .collect()
}

/// Substitutes `σ = s` (and `σ^{-1} = s^{-1}`) into every entry.
pub fn endo_from_diffmatrix(f: &DiffMatrix, n: u64, s: u64) -> Result<TorsionEndo> {
    let k = f.require_square()?;
    let base = TorsionModule::new(n, k)?;
    let n2 = n * n;
    let s_inv = inv_mod((s % n) as i64, n as i64).ok_or(Error::NotUnit(s as i64, n as i64))?;
    let s_inv2 = inv_mod((s % n2) as i64, n2 as i64).ok_or(Error::NotUnit(s as i64, n as i64))? as u64;
    Ok(TorsionEndo {
        base,
        s: s % n,
        matrix: substitute(f, s % n, s_inv as u64, n),
        lift: substitute(f, s % n2, s_inv2, n2),
    })
}

/// Builds an endomorphism directly from a matrix mod `n` (lift taken as the
/// same integers).
pub fn endo_from_matrix(matrix: Vec<Vec<u64>>, n: u64) -> Result<TorsionEndo> {
    let base = TorsionModule::new(n, matrix.len())?;
    if matrix.iter().any(|r| r.len() != base.k) {
        return Err(Error::NotSquare { rows: base.k, cols: matrix.first().map_or(0, Vec::len) });
    }
    let matrix: Vec<Vec<u64>> = matrix.into_iter().map(|r| r.into_iter().map(|x| x % n).collect()).collect();
    Ok(TorsionEndo { base, s: 1, lift: matrix.clone(), matrix })
}

impl TorsionEndo {
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let n = self.base.n;
        self.matrix.iter().map(|row| row.iter().zip(x).fold(0u64, |acc, (a, b)| (acc + a * b % n) % n)).collect()
    }

    fn apply_lift(&self, x: &[u64]) -> Vec<u64> {
        let n2 = self.base.n * self.base.n;
        self.lift
            .iter()
            .map(|row| row.iter().zip(x).fold(0u128, |acc, (a, b)| (acc + *a as u128 * *b as u128) % n2 as u128) as u64)
            .collect()
    }

    fn int_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.base.k, self.base.k, |i, j| BigInt::from(self.matrix[i][j]))
    }

    /// Smith form of `[M | nI]`, whose column span is `f(A[n]) + nZ^k`.
    fn augmented_smith(&self) -> Smith<BigInt> {
        let k = self.base.k;
        let n = BigInt::from(self.base.n);
        let aug = IntMatrix::from_fn(k, 2 * k, |i, j| {
            if j < k {
                BigInt::from(self.matrix[i][j])
            } else if j - k == i {
                n.clone()
            } else {
                BigInt::zero()
            }
        });
        smith_normal_form(&aug)
    }

    fn cokernel_diagonal(&self) -> (Smith<BigInt>, Vec<u64>) {
        let smith = self.augmented_smith();
        let diag = smith.diagonal().iter().map(|d| d.abs().to_u64().expect("divisor of n")).collect();
        (smith, diag)
    }
}

/// Cokernel of `f` on `(Z/nZ)^k`, plus the kernel size from the Smith form
/// of `f` alone.
pub fn quotient_structure(e: &TorsionEndo) -> QuotientStructure {
    let (_, diag) = e.cokernel_diagonal();
    let order = diag.iter().product();
    let elementary_divisors = diag.into_iter().filter(|&d| d > 1).collect();
    let n = BigInt::from(e.base.n);
    let inner = smith_normal_form(&e.int_matrix()).diagonal();
    let kernel_order = inner
        .iter()
        .map(|s| if s.is_zero() { n.clone() } else { s.abs().gcd(&n) })
        .fold(BigInt::one(), |acc, g| acc * g)
        .to_u64()
        .expect("kernel fits");
    QuotientStructure { elementary_divisors, order, kernel_order, index_equals_kernel: order == kernel_order }
}

pub fn report(e: &TorsionEndo) -> TorsionReport {
    let q = quotient_structure(e);
    TorsionReport {
        n: e.base.n,
        s: e.s,
        elementary_divisors: q.elementary_divisors,
        order: q.order,
        index_equals_kernel: q.index_equals_kernel,
    }
}

/// Canonical coset of `v ∈ (Z/nZ)^k` modulo `f(A[n])`.
pub fn coset_of(e: &TorsionEndo, v: &[u64]) -> Coset {
    let (smith, diag) = e.cokernel_diagonal();
    let col: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    let w = smith.u.mul_vec(&col);
    let (mut coords, mut divisors) = (Vec::new(), Vec::new());
    for (x, d) in w.iter().zip(diag) {
        if d > 1 {
            coords.push(x.mod_floor(&BigInt::from(d)).to_u64().expect("reduced"));
            divisors.push(d);
        }
    }
    Coset { coords, divisors }
}

/// `φ(a) = f(b) + f(A[n])` where `[n]b = a`.
///
/// `A[n]` is modelled as `(1/n)Z^k / Z^k` and `A[n²]` as `(1/n²)Z^k / Z^k`,
/// so `a = x/n` with `x ∈ (Z/nZ)^k` has the `n`-th root `b = x/n²`. The
/// caller passes `x`; other lifts `x + n·y` change `b` by `y/n ∈ A[n]` and
/// must give the same coset, which is checked on every basis shift.
pub fn phi_map(e: &TorsionEndo, x: &[u64]) -> Result<Coset> {
    let n = e.base.n;
    if x.len() != e.base.k {
        return Err(Error::Dimension(format!("element has {} coordinates, rank is {}", x.len(), e.base.k)));
    }
    let x: Vec<u64> = x.iter().map(|c| c % n).collect();
    if e.apply(&x).iter().any(|&c| c != 0) {
        return Err(Error::NotInKernel);
    }
    let phi = |lift: &[u64]| {
        // f(b) = M·lift / n², which is M·lift / n in (1/n)Z/Z
        let y: Vec<u64> = e.apply_lift(lift).iter().map(|c| (c / n) % n).collect();
        coset_of(e, &y)
    };
    let base = phi(&x);
    for i in 0..e.base.k {
        let mut shifted = x.clone();
        shifted[i] += n;
        if phi(&shifted) != base {
            return Err(Error::Invalid(format!("phi depends on the choice of n-th root (coordinate {i})")));
        }
    }
    Ok(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntLaurent;

    fn sig(terms: &[(i64, i64)]) -> IntLaurent {
        IntLaurent::from_i64(terms)
    }

    #[test]
    fn substitution_examples() {
        let f = DiffMatrix::from_rows(vec![vec![sig(&[(1, 1), (0, -2)])]]).unwrap();
        assert_eq!(endo_from_diffmatrix(&f, 3, 1).unwrap().matrix, vec![vec![2]]);
        assert_eq!(endo_from_diffmatrix(&f, 3, 2).unwrap().matrix, vec![vec![0]]);
        assert_eq!(endo_from_diffmatrix(&f, 3, 3).unwrap_err(), Error::NotUnit(3, 3));
        let g = DiffMatrix::from_rows(vec![vec![sig(&[(1, 1)]), sig(&[(0, 1)])], vec![sig(&[]), sig(&[(1, 1)])]]).unwrap();
        assert_eq!(endo_from_diffmatrix(&g, 4, 3).unwrap().matrix, vec![vec![3, 1], vec![0, 3]]);
        let inv = DiffMatrix::from_rows(vec![vec![sig(&[(-1, 1)])]]).unwrap();
        assert_eq!(endo_from_diffmatrix(&inv, 7, 3).unwrap().matrix, vec![vec![5]]);
    }

    #[test]
    fn quotients() {
        let q = quotient_structure(&endo_from_matrix(vec![vec![2]], 3).unwrap());
        assert_eq!((q.order, q.elementary_divisors.len()), (1, 0));
        let q = quotient_structure(&endo_from_matrix(vec![vec![0]], 3).unwrap());
        assert_eq!((q.order, q.elementary_divisors), (3, vec![3]));
        let q = quotient_structure(&endo_from_matrix(vec![vec![2, 0], vec![0, 4]], 8).unwrap());
        assert_eq!(q.elementary_divisors, vec![2, 4]);
        assert!(q.index_equals_kernel);
    }

    #[test]
    fn phi_is_additive() {
        let e = endo_from_matrix(vec![vec![2, 0], vec![0, 0]], 4).unwrap();
        let kernel: Vec<Vec<u64>> = e.base.elements().filter(|x| e.apply(x).iter().all(|&c| c == 0)).collect();
        for a in &kernel {
            for b in &kernel {
                let sum: Vec<u64> = a.iter().zip(b).map(|(x, y)| (x + y) % 4).collect();
                assert_eq!(phi_map(&e, &sum).unwrap(), phi_map(&e, a).unwrap().add(&phi_map(&e, b).unwrap()));
            }
        }
        assert_eq!(phi_map(&e, &[1, 0]), Err(Error::NotInKernel));
    }
}
