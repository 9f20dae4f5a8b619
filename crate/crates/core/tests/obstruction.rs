use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use sigmatorus::babbitt::{babbitt_finite, babbitt_quadratic_function_field, MonomialMap};
use sigmatorus::difference::{companion_matrix, is_modular};
use sigmatorus::error::Error;
use sigmatorus::field::{FiniteField, GaloisField, PrimeField};
use sigmatorus::hahn::{ExponentGroup, Weight};
use sigmatorus::obstruction::{obstruct, theta_invariant, DatumSpec, RamificationDatum, Verdict};
use sigmatorus::recurrence::{eigenvalue_power_of_p, Budget};
use sigmatorus::{IntLaurent, IntPoly};

fn lp(t: &[(i64, i64)]) -> IntLaurent {
    IntLaurent::from_i64(t)
}

fn spec(p: u64, terms: Vec<(Vec<i64>, Vec<u64>)>) -> DatumSpec {
    DatumSpec { field: GaloisField::new(p, 1).unwrap(), terms, group: None }
}

#[test]
fn theta_examples() {
    let f2 = GaloisField::new(2, 1).unwrap();
    let z = ExponentGroup::integers();
    let one = vec![1];
    let d = RamificationDatum::new(f2.clone(), z.clone(), vec![(vec![-1], one.clone())]).unwrap();
    assert_eq!(theta_invariant(&d).unwrap(), z.exponent_i64(&[-1]).unwrap());
    let d = RamificationDatum::new(f2.clone(), z.clone(), vec![(vec![-1], one.clone()), (vec![-3], one.clone())]).unwrap();
    assert_eq!(theta_invariant(&d).unwrap(), z.exponent_i64(&[-3]).unwrap());
    let d = RamificationDatum::new(f2, z, vec![(vec![-2], one)]).unwrap();
    assert_eq!(theta_invariant(&d), Err(Error::DatumNotReduced));
}

#[test]
fn obstruct_examples() {
    let golden = lp(&[(0, -1), (1, -1), (2, 1)]);
    let r = obstruct(&golden, 2, &spec(2, vec![(vec![1, 0], vec![1])]), 1e-4, &Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Obstructed);
    assert_eq!(r.witness, None);
    assert!(r.theta.unwrap().value < 0.0);
    let e = obstruct(&lp(&[(0, -2), (1, 1)]), 2, &spec(2, vec![(vec![1], vec![1])]), 1e-4, &Budget::default());
    assert!(matches!(e, Err(Error::HypothesisViolated(_))));
    let r = obstruct(&lp(&[(0, -2), (1, 3)]), 2, &spec(2, vec![(vec![1], vec![1])]), 1e-4, &Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Obstructed);
}

#[test]
fn explicit_group_is_respected() {
    let phi = sigmatorus::realalg::AlgebraicReal::sqrt(5).unwrap();
    let g = ExponentGroup::new(vec![Weight::Algebraic(Arc::new(phi)), Weight::Rational(BigRational::from_integer(BigInt::from(-3)))], 1).unwrap();
    let spec = DatumSpec { field: GaloisField::new(2, 1).unwrap(), terms: vec![(vec![0, 1], vec![1])], group: Some(g) };
    let r = obstruct(&lp(&[(0, -1), (1, -1), (2, 1)]), 2, &spec, 1e-4, &Budget::default()).unwrap();
    assert_eq!(r.theta.unwrap().exponent, vec!["0", "1"]);
}

#[test]
fn verdict_is_monotone_in_budget() {
    let f = lp(&[(0, -1), (1, -1), (2, 1)]);
    let s = spec(2, vec![(vec![1, 0], vec![1])]);
    let mut seen_obstructed = false;
    for r in [0.05, 0.1, 0.25, 0.5, 1.0, 2.0] {
        let rep = obstruct(&f, 2, &s, 1e-4, &Budget::default().scaled(r)).unwrap();
        if seen_obstructed {
            assert_eq!(rep.verdict, Verdict::Obstructed, "lost the verdict at scale {r}");
        }
        seen_obstructed |= rep.verdict == Verdict::Obstructed;
    }
    assert!(seen_obstructed);
}

#[test]
fn babbitt_examples() {
    let f4 = GaloisField::new(2, 2).unwrap();
    let r = babbitt_finite(&f4, &[f4.generator(), vec![1, 0], vec![1, 0]], 1).unwrap();
    assert_eq!((r.root_count, r.stable), (2, true));
    let f3 = PrimeField::new(3).unwrap();
    let sq = MonomialMap { c: 1, d: 2, frobenius: 0 };
    assert!(babbitt_quadratic_function_field(&f3, &[0, 1], &[1], &sq).unwrap().stable);
    assert!(!babbitt_quadratic_function_field(&f3, &[1, 1], &[1], &sq).unwrap().stable);
}

fn poly_deg_le_3() -> impl Strategy<Value = IntPoly> {
    (prop::collection::vec(-6i64..=6, 1..=3), 1i64..=6).prop_map(|(mut c, lc)| {
        if c[0] == 0 {
            c[0] = 1;
        }
        c.push(lc);
        IntPoly::from_i64(&c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn modularity_and_eigenvalues_cohere(g in poly_deg_le_3(), p in prop_oneof![Just(2u64), Just(3), Just(5)]) {
        let f = IntLaurent::from_int_poly(0, &g);
        if is_modular(&f, p).unwrap().modular {
            let a = companion_matrix(&f).unwrap();
            prop_assert_eq!(eigenvalue_power_of_p(&a, p, 8).unwrap(), None);
        } else {
            let s = spec(p, vec![(vec![-1; g.degree().unwrap()], vec![1])]);
            let refused = matches!(obstruct(&f, p, &s, 1e-4, &Budget::default()), Err(Error::HypothesisViolated(_)));
            prop_assert!(refused);
        }
    }

    #[test]
    fn finite_root_count_in_range(k in 1u32..=2, e in 0u32..3, seed in prop::collection::vec(0u64..16, 1..=4)) {
        let field = GaloisField::new(3, k).unwrap();
        let mut poly: Vec<Vec<u64>> = seed.iter().map(|&i| field.element(i % field.order())).collect();
        poly.push(field.element(1));
        match babbitt_finite(&field, &poly, e) {
            Ok(r) => {
                prop_assert!(r.root_count <= r.degree);
                prop_assert_eq!(r.root_count, r.degree);
                prop_assert!(r.stable);
            }
            Err(err) => prop_assert_eq!(err, Error::Reducible),
        }
    }
}
