//! Projective dynamics of a matrix: near returns of directions under `A^m`,
//! recurrent-direction search, and exact power-of-`p` eigenvalue detection.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{floor_log, is_prime, rational_pow};
use crate::error::{Error, Result};
use crate::field::rational_to_f64;
use crate::matrix::Matrix;
use crate::roots::eigenvalues;
use crate::RatMatrix;

/// Drift allowed on the unit norm of a direction.
pub const NORM_TOLERANCE: f64 = 1e-12;

fn cast<T: Float>(x: f64) -> T {
    T::from(x).expect("float cast")
}

/// Unit vector in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction<T> {
    vector: Vec<T>,
}

impl<T: Float> Direction<T> {
    pub fn new(v: Vec<T>) -> Result<Self> {
        let norm = euclid_norm(&v);
        if v.is_empty() || norm.is_zero() || !norm.is_finite() {
            return Err(Error::Invalid("direction must be a finite nonzero vector".into()));
        }
        Ok(Direction { vector: v.into_iter().map(|x| x / norm).collect() })
    }

    pub fn vector(&self) -> &[T] {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn distance(&self, other: &[T]) -> T {
        euclid_norm(&self.vector.iter().zip(other).map(|(a, b)| *a - *b).collect::<Vec<_>>())
    }
}

fn euclid_norm<T: Float>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| acc.hypot(*x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DominantReal,
    ComplexPair,
    OrbitScan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceWitness<T> {
    pub direction: Direction<T>,
    pub epsilon: T,
    pub return_times: Vec<u64>,
    pub method: Method,
}

/// Closest approach seen when no return was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate<T> {
    pub direction: Direction<T>,
    pub closest: T,
    pub at: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Recurrence<T> {
    Found(RecurrenceWitness<T>),
    BudgetExhausted { best: Option<Candidate<T>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Iteration bound for listing return times.
    pub horizon: u64,
    pub orbit_steps: u64,
    pub samples: usize,
    pub j_max: u32,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { horizon: 64, orbit_steps: 10_000, samples: 64, j_max: 12, seed: 0 }
    }
}

impl Budget {
    /// Multiplies every iteration budget by `r`, never going below 1.
    pub fn scaled(&self, r: f64) -> Budget {
        let s = |x: f64| (x * r).round().max(1.0);
        Budget {
            horizon: s(self.horizon as f64) as u64,
            orbit_steps: s(self.orbit_steps as f64) as u64,
            samples: s(self.samples as f64) as usize,
            j_max: s(self.j_max as f64) as u32,
            seed: self.seed,
        }
    }
}

fn step<T: Float>(a: &Matrix<T>, v: &[T]) -> Vec<T> {
    let w = a.mul_vec(v);
    let n = euclid_norm(&w);
    w.into_iter().map(|x| x / n).collect()
}

fn check_invertible<T: Float>(a: &Matrix<T>) -> Result<()> {
    a.require_square()?;
    let det = a.determinant();
    if det.is_zero() || !det.is_finite() {
        return Err(Error::Singular);
    }
    Ok(())
}

/// Every `m ≤ m_max` with `‖A^m γ / ‖A^m γ‖ − γ‖ < ε`, iterating with
/// renormalization at each step.
pub fn near_returns<T: Float>(a: &Matrix<T>, gamma: &Direction<T>, eps: T, m_max: u64) -> Result<Vec<u64>> {
    check_invertible(a)?;
    if gamma.dim() != a.rows() {
        return Err(Error::Dimension(format!("direction of length {} for a {}x{} matrix", gamma.dim(), a.rows(), a.cols())));
    }
    if !(eps > T::zero()) {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }
    Ok(orbit(a, gamma, m_max).filter(|(_, d)| *d < eps).map(|(m, _)| m).collect())
}

/// `(m, distance to γ)` along the renormalized orbit.
fn orbit<'a, T: Float + 'a>(a: &'a Matrix<T>, gamma: &'a Direction<T>, m_max: u64) -> impl Iterator<Item = (u64, T)> + 'a {
    let mut v = gamma.vector().to_vec();
    (1..=m_max).map(move |m| {
        v = step(a, &v);
        (m, gamma.distance(&v))
    })
}

/// Searches for a recurrent direction of `A` by the strategy ladder
/// dominant-real, complex-pair, orbit-scan. Every returned witness lists
/// exactly the near returns found by direct iteration.
pub fn find_recurrent_direction<T>(a: &RatMatrix, eps: T, budget: &Budget) -> Result<Recurrence<T>>
where
    T: Float + Send + Sync,
{
    a.require_square()?;
    if a.determinant().is_zero() {
        return Err(Error::Singular);
    }
    if !(eps > T::zero()) {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }
    let af: Matrix<T> = a.map(|x| cast(rational_to_f64(x)));
    let spectrum: Vec<Complex<T>> = eigenvalues(a);

    match dominant(&spectrum) {
        Some(Dominant::Real(lambda)) => {
            if let Some(w) = try_eigen(&af, lambda, eps, budget.horizon, Method::DominantReal)? {
                return Ok(Recurrence::Found(w));
            }
        }
        Some(Dominant::Pair(lambda)) => {
            let angle = lambda.arg().abs() / cast(std::f64::consts::TAU);
            let horizon = rotation_horizon(angle, eps, budget);
            if let Some(w) = try_eigen(&af, lambda, eps, horizon, Method::ComplexPair)? {
                return Ok(Recurrence::Found(w));
            }
        }
        None => {}
    }
    log::debug!("no eigen-direction witness at eps {:e}, falling back to orbit scan", eps.to_f64().unwrap_or(f64::NAN));
    orbit_scan(&af, eps, budget)
}

enum Dominant<T> {
    Real(Complex<T>),
    Pair(Complex<T>),
}

/// The eigenvalue(s) of strictly maximal modulus, when they are a single
/// real value or a single conjugate pair.
fn dominant<T: Float>(spectrum: &[Complex<T>]) -> Option<Dominant<T>> {
    let tol: T = cast(1e-9);
    let top = spectrum.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let at_top: Vec<&Complex<T>> = spectrum.iter().filter(|z| (z.norm() - top).abs() <= tol * top).collect();
    let is_real = |z: &Complex<T>| z.im.abs() <= tol * top;
    let first = *at_top.first()?;
    let same = |x: &Complex<T>, y: &Complex<T>| (*x - *y).norm() <= tol * top;
    if at_top.iter().all(|z| same(z, first)) && is_real(first) {
        return Some(Dominant::Real(Complex::new(first.re, T::zero())));
    }
    let upper = at_top.iter().find(|z| z.im > T::zero())?;
    let conj = upper.conj();
    if at_top.iter().all(|z| same(z, upper) || same(z, &conj)) && !is_real(upper) {
        return Some(Dominant::Pair(**upper));
    }
    None
}

/// Horizon long enough to contain a continued-fraction convergent `q` of
/// the rotation number with `2π·|qθ − p| < ε/4`, capped by the orbit budget.
fn rotation_horizon<T: Float>(theta: T, eps: T, budget: &Budget) -> u64 {
    let target = eps / cast(4.0 * std::f64::consts::TAU);
    let mut horizon = budget.horizon;
    for q in convergent_denominators(theta, budget.orbit_steps) {
        horizon = horizon.max(q);
        let qt = cast::<T>(q as f64) * theta;
        if (qt - qt.round()).abs() < target {
            break;
        }
    }
    horizon.min(budget.orbit_steps.max(budget.horizon))
}

/// Denominators of the continued-fraction convergents of `x`, up to `cap`.
pub fn convergent_denominators<T: Float>(x: T, cap: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut q_prev, mut q) = (0u64, 1u64);
    let mut r = x - x.floor();
    out.push(1);
    for _ in 0..64 {
        if r < cast(1e-12) {
            break;
        }
        let inv = T::one() / r;
        let a = inv.floor();
        let Some(ai) = a.to_u64() else { break };
        let Some(next) = ai.checked_mul(q).and_then(|v| v.checked_add(q_prev)) else { break };
        if next > cap {
            break;
        }
        q_prev = q;
        q = next;
        out.push(q);
        r = inv - a;
    }
    out
}

fn try_eigen<T: Float>(
    a: &Matrix<T>,
    lambda: Complex<T>,
    eps: T,
    horizon: u64,
    method: Method,
) -> Result<Option<RecurrenceWitness<T>>> {
    let v = eigenvector(a, lambda);
    let re: Vec<T> = v.iter().map(|z| z.re).collect();
    let im: Vec<T> = v.iter().map(|z| z.im).collect();
    let pick = if euclid_norm(&re) >= euclid_norm(&im) { re } else { im };
    let Ok(direction) = Direction::new(pick) else { return Ok(None) };
    let return_times = near_returns(a, &direction, eps, horizon)?;
    if return_times.is_empty() {
        return Ok(None);
    }
    Ok(Some(RecurrenceWitness { direction, epsilon: eps, return_times, method }))
}

/// Inverse iteration for an eigenvector of `λ`, with the phase fixed so the
/// largest coordinate is real and positive.
fn eigenvector<T: Float>(a: &Matrix<T>, lambda: Complex<T>) -> Vec<Complex<T>> {
    let n = a.rows();
    let scale = lambda.norm().max(T::one());
    let shift = lambda + Complex::new(scale * cast(1e-11), T::zero());
    let mut v: Vec<Complex<T>> = (0..n).map(|i| Complex::new(T::one() + cast(i as f64 * 0.1), T::zero())).collect();
    for _ in 0..4 {
        v = solve_shifted(a, shift, &v);
        let norm = v.iter().fold(T::zero(), |acc, z| acc.hypot(z.norm()));
        v = v.into_iter().map(|z| z / norm).collect();
    }
    let pivot = v.iter().copied().fold(Complex::zero(), |best: Complex<T>, z| if z.norm() > best.norm() { z } else { best });
    let phase = pivot.conj() / pivot.norm();
    v.into_iter().map(|z| z * phase).collect()
}

/// Solves `(A − μI) x = b` by Gaussian elimination with partial pivoting;
/// exact zero pivots are nudged so the solve always completes.
fn solve_shifted<T: Float>(a: &Matrix<T>, mu: Complex<T>, b: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = a.rows();
    let mut m: Vec<Vec<Complex<T>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex::new(*a.get(i, j), T::zero()) - if i == j { mu } else { Complex::zero() })
                .collect()
        })
        .collect();
    let mut x: Vec<Complex<T>> = b.to_vec();
    let tiny: T = T::epsilon() * mu.norm().max(T::one());
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap()).unwrap();
        m.swap(col, p);
        x.swap(col, p);
        if m[col][col].norm() < tiny {
            m[col][col] = Complex::new(tiny, T::zero());
        }
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                let t = m[col][c];
                m[r][c] = m[r][c] - f * t;
            }
            let t = x[col];
            x[r] = x[r] - f * t;
        }
    }
    for col in (0..n).rev() {
        let s = (col + 1..n).fold(x[col], |acc, c| acc - m[col][c] * x[c]);
        x[col] = s / m[col][col];
    }
    x
}

fn orbit_scan<T: Float + Send + Sync>(a: &Matrix<T>, eps: T, budget: &Budget) -> Result<Recurrence<T>> {
    let n = a.rows();
    let burn_in = budget.orbit_steps / 2;
    let watch = budget.orbit_steps - burn_in;
    let results: Vec<(Direction<T>, Vec<u64>, T, u64)> = (0..budget.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(i as u64);
            let raw: Vec<T> = (0..n).map(|_| cast(StandardNormal.sample(&mut rng))).collect();
            let mut v = Direction::new(raw).map(|d| d.vector).unwrap_or_else(|_| {
                let mut e = vec![T::zero(); n];
                e[0] = T::one();
                e
            });
            for _ in 0..burn_in {
                v = step(a, &v);
            }
            let gamma = Direction::new(v).expect("orbit stays on the sphere");
            let mut hits = Vec::new();
            let (mut closest, mut at) = (T::infinity(), 0);
            for (m, d) in orbit(a, &gamma, watch) {
                if d < eps {
                    hits.push(m);
                }
                if d < closest {
                    closest = d;
                    at = m;
                }
            }
            (gamma, hits, closest, at)
        })
        .collect();

    let best_hit = results
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.1.is_empty())
        .max_by(|(i, x), (j, y)| x.1.len().cmp(&y.1.len()).then(j.cmp(i)));
    if let Some((_, (gamma, hits, _, _))) = best_hit {
        return Ok(Recurrence::Found(RecurrenceWitness {
            direction: gamma.clone(),
            epsilon: eps,
            return_times: hits.clone(),
            method: Method::OrbitScan,
        }));
    }
    let best = results
        .into_iter()
        .min_by(|x, y| x.2.partial_cmp(&y.2).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(direction, _, closest, at)| Candidate { direction, closest, at });
    Ok(Recurrence::BudgetExhausted { best })
}

/// Smallest `j ≤ j_max`, then the `m` of least absolute value (positive
/// first), with `p^m` an eigenvalue of `A^j`. Exact over `Q`. The range of
/// `m` for each `j` comes from `p^m ≤ n·‖A^j‖_∞` and `p^{−m} ≤ n·‖A^{−j}‖_∞`.
pub fn eigenvalue_power_of_p(a: &RatMatrix, p: u64, j_max: u32) -> Result<Option<(u32, i64)>> {
    let n = a.require_square()?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let inv = a.inverse().ok_or(Error::Singular)?;
    let dim = BigRational::from_integer(BigInt::from(n));
    let mut power = a.clone();
    let mut inv_power = inv.clone();
    for j in 1..=j_max {
        if j > 1 {
            power = power.mul(a);
            inv_power = inv_power.mul(&inv);
        }
        let hi = floor_log(p, &(&dim * power.row_sum_norm())).map_or(-1, |m| m as i64);
        let lo = floor_log(p, &(&dim * inv_power.row_sum_norm())).map_or(1, |m| -(m as i64));
        let cp = power.charpoly();
        let eval = |x: &BigRational| cp.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
        let bound = hi.max(-lo).max(0);
        for k in 0..=bound {
            for m in if k == 0 { vec![0] } else { vec![k, -k] } {
                if m < lo || m > hi {
                    continue;
                }
                if eval(&rational_pow(p, m)).is_zero() {
                    return Ok(Some((j, m)));
                }
            }
        }
    }
    Ok(None)
}

/// `true` when `A^j` has `p^m` as an exact eigenvalue.
pub fn has_eigenvalue(a: &RatMatrix, j: u32, p: u64, m: i64) -> bool {
    let cp = a.pow(j).charpoly();
    let x = rational_pow(p, m);
    cp.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fm(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn rm(rows: &[&[i64]]) -> RatMatrix {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_rotation_returns() {
        let g = Direction::new(vec![0.3, -0.7]).unwrap();
        assert_eq!(near_returns(&fm(&[&[1.0, 0.0], &[0.0, 1.0]]), &g, 0.1, 10).unwrap(), (1..=10).collect::<Vec<_>>());
        let e1 = Direction::new(vec![1.0, 0.0]).unwrap();
        let rot = fm(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert_eq!(near_returns(&rot, &e1, 0.1, 12).unwrap(), vec![4, 8, 12]);
        assert_eq!(near_returns(&fm(&[&[1.0, 2.0], &[2.0, 4.0]]), &e1, 0.1, 3), Err(Error::Singular));
    }

    #[test]
    fn golden_dominant_real() {
        let Recurrence::Found(w) = find_recurrent_direction(&rm(&[&[2, 1], &[1, 1]]), 1e-4, &Budget::default()).unwrap()
        else {
            panic!("no witness")
        };
        assert_eq!(w.method, Method::DominantReal);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let exact = Direction::new(vec![phi, 1.0]).unwrap();
        assert!(w.direction.distance(exact.vector()) < 1e-9);
        assert_eq!(w.return_times, (1..=64).collect::<Vec<_>>());
    }

    #[test]
    fn rotation_complex_pair() {
        let Recurrence::Found(w) = find_recurrent_direction(&rm(&[&[0, -1], &[1, 0]]), 1e-4, &Budget::default()).unwrap()
        else {
            panic!("no witness")
        };
        assert_eq!(w.method, Method::ComplexPair);
        assert!(!w.return_times.is_empty());
        assert!(w.return_times.iter().all(|m| m % 4 == 0));
    }

    #[test]
    fn equal_modulus_real_pair_falls_to_orbit_scan() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let a = Matrix::from_rows(vec![vec![q(0, 1), q(2, 3)], vec![q(1, 1), q(0, 1)]]).unwrap();
        let Recurrence::Found(w) = find_recurrent_direction(&a, 1e-3, &Budget::default()).unwrap() else {
            panic!("no witness")
        };
        assert_eq!(w.method, Method::OrbitScan);
        assert!(w.return_times.iter().all(|m| m % 2 == 0));
    }

    #[test]
    fn power_of_p_examples() {
        assert_eq!(eigenvalue_power_of_p(&rm(&[&[2]]), 2, 12).unwrap(), Some((1, 1)));
        assert_eq!(eigenvalue_power_of_p(&rm(&[&[2, 1], &[1, 1]]), 2, 6).unwrap(), None);
        // eigenvalues ±2, so j = 1 already succeeds
        assert_eq!(eigenvalue_power_of_p(&rm(&[&[0, 4], &[1, 0]]), 2, 4).unwrap(), Some((1, 1)));
        assert_eq!(eigenvalue_power_of_p(&rm(&[&[-2, 0], &[0, -2]]), 2, 4).unwrap(), Some((2, 2)));
        assert_eq!(eigenvalue_power_of_p(&rm(&[&[1, 0], &[0, 4]]), 2, 4).unwrap(), Some((1, 0)));
        let half = Matrix::from_rows(vec![vec![BigRational::new(1.into(), 4.into())]]).unwrap();
        assert_eq!(eigenvalue_power_of_p(&half, 2, 4).unwrap(), Some((1, -2)));
    }

    #[test]
    fn convergents_of_golden_ratio_are_fibonacci() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(convergent_denominators(phi, 100), vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
    }
}
