//! Complex roots of real polynomials (Aberth–Ehrlich) and matrix spectra.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, Zero};

use crate::factor::squarefree_over_q;
use crate::field::rational_to_f64;
use crate::intpoly::IntPoly;
use crate::RatMatrix;

const MAX_SWEEPS: usize = 500;

fn cast<T: Float>(x: f64) -> T {
    T::from(x).expect("float cast")
}

fn horner<T: Float>(coeffs: &[T], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let mut p = Complex::zero();
    let mut dp = Complex::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(c, T::zero());
    }
    (p, dp)
}

/// All complex roots of `Σ coeffs[i]·x^i`, by simultaneous Aberth iteration
/// followed by a Newton polish. Accurate for simple roots.
pub fn aberth<T: Float>(coeffs: &[T]) -> Vec<Complex<T>> {
    let mut c: Vec<T> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    // Cauchy bound on root moduli
    let radius = c[..n].iter().fold(T::zero(), |m, x| m.max((*x / lead).abs())) + T::one();
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let angle = cast::<T>(std::f64::consts::TAU) * cast(k as f64 + 0.25) / cast(n as f64);
            Complex::from_polar(radius * cast(0.5), angle)
        })
        .collect();
    let tol = T::epsilon() * cast(16.0);
    for _ in 0..MAX_SWEEPS {
        let mut moved = T::zero();
        for i in 0..n {
            let (p, dp) = horner(&c, z[i]);
            if p.norm().is_zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion = (0..n)
                .filter(|&j| j != i)
                .fold(Complex::zero(), |acc, j| acc + (z[i] - z[j]).inv());
            let step = ratio / (Complex::new(T::one(), T::zero()) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] = z[i] - step;
                moved = moved.max(step.norm() / (T::one() + z[i].norm()));
            }
        }
        if moved < tol {
            break;
        }
    }
    for zi in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(&c, *zi);
            if dp.norm().is_zero() {
                break;
            }
            let step = p / dp;
            if step.re.is_finite() && step.im.is_finite() {
                *zi = *zi - step;
            }
        }
    }
    z
}

/// Eigenvalues of an exact rational matrix, repeated by algebraic
/// multiplicity. Roots are found on the squarefree parts of the exact
/// characteristic polynomial, so multiple eigenvalues stay accurate.
pub fn eigenvalues<T: Float>(a: &RatMatrix) -> Vec<Complex<T>> {
    let cp: Vec<BigRational> = a.charpoly();
    let g = IntPoly::from_rational(&cp);
    let mut out = Vec::new();
    for (part, mult) in squarefree_over_q(&g) {
        let coeffs: Vec<T> = part.to_rational().iter().map(|c| cast(rational_to_f64(c))).collect();
        for r in aberth(&coeffs) {
            out.extend(std::iter::repeat_n(r, mult));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_and_cubic() {
        let mut r = aberth(&[1.0, -3.0, 1.0]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((r[1].re - phi2).abs() < 1e-13 && r[1].im.abs() < 1e-13);
        assert!((r[0].re - 1.0 / phi2).abs() < 1e-13);
        let r = aberth(&[1.0, 1.0, 1.0, 1.0]);
        for z in r {
            let v = z * z * z + z * z + z + Complex::new(1.0, 0.0);
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn repeated_eigenvalues_are_exact_enough() {
        let two = BigRational::from_integer((-2).into());
        let a = RatMatrix::scalar(4, two);
        let ev: Vec<Complex<f64>> = eigenvalues(&a);
        assert_eq!(ev.len(), 4);
        assert!(ev.iter().all(|z| (z - Complex::new(-2.0, 0.0)).norm() < 1e-14));
    }
}
