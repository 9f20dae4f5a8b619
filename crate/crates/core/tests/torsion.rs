use std::collections::HashSet;

use proptest::prelude::*;

use sigmatorus::torsion::{endo_from_diffmatrix, endo_from_matrix, phi_map, quotient_structure, TorsionEndo};
use sigmatorus::{DiffMatrix, IntLaurent};

fn all_matrices(n: u64, k: usize) -> impl Iterator<Item = Vec<Vec<u64>>> {
    let total = n.pow((k * k) as u32);
    (0..total).map(move |mut idx| {
        let mut m = vec![vec![0; k]; k];
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x = idx % n;
                idx /= n;
            }
        }
        m
    })
}

fn elements(n: u64, k: usize) -> Vec<Vec<u64>> {
    all_matrices(n, k).map(|m| m.into_iter().next().unwrap()).collect::<HashSet<_>>().into_iter().collect()
}

fn mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], n: u64) -> Vec<Vec<u64>> {
    let k = a.len();
    (0..k).map(|i| (0..k).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum::<u64>() % n).collect()).collect()
}

fn kernel(e: &TorsionEndo, elems: &[Vec<u64>]) -> Vec<Vec<u64>> {
    elems.iter().filter(|x| e.apply(x).iter().all(|&c| c == 0)).cloned().collect()
}

#[test]
fn cokernel_matches_kernel_by_enumeration() {
    for k in 1..=2 {
        for n in 2..=8u64 {
            let elems = elements(n, k);
            assert_eq!(elems.len() as u64, n.pow(k as u32));
            for m in all_matrices(n, k) {
                let e = endo_from_matrix(m.clone(), n).unwrap();
                let q = quotient_structure(&e);
                let image: HashSet<Vec<u64>> = elems.iter().map(|x| e.apply(x)).collect();
                let coker = elems.len() / image.len();
                assert_eq!(q.order as usize, coker, "{m:?} mod {n}");
                assert_eq!(kernel(&e, &elems).len(), coker, "{m:?} mod {n}");
                assert!(q.index_equals_kernel);
                assert!(q.elementary_divisors.windows(2).all(|w| w[1] % w[0] == 0));
                assert_eq!(q.elementary_divisors.iter().product::<u64>(), q.order);
            }
        }
    }
}

#[test]
fn substitution_and_quotient_examples() {
    let sig = |t: &[(i64, i64)]| IntLaurent::from_i64(t);
    let f = DiffMatrix::from_rows(vec![vec![sig(&[(1, 1)]), sig(&[(0, 1)])], vec![IntLaurent::from_i64(&[]), sig(&[(1, 1)])]]).unwrap();
    let e = endo_from_diffmatrix(&f, 4, 3).unwrap();
    assert_eq!(e.matrix, vec![vec![3, 1], vec![0, 3]]);
    let elems = elements(4, 2);
    let image: HashSet<Vec<u64>> = elems.iter().map(|x| e.apply(x)).collect();
    assert_eq!(quotient_structure(&e).order as usize, 16 / image.len());
}

#[test]
fn phi_is_a_homomorphism() {
    for k in 1..=2 {
        for n in 2..=4u64 {
            let elems = elements(n, k);
            for m in all_matrices(n, k) {
                let e = endo_from_matrix(m, n).unwrap();
                let ker = kernel(&e, &elems);
                let zero = vec![0; k];
                assert!(phi_map(&e, &zero).unwrap().is_zero());
                for a in &ker {
                    for b in &ker {
                        let sum: Vec<u64> = a.iter().zip(b).map(|(x, y)| (x + y) % n).collect();
                        let lhs = phi_map(&e, &sum).unwrap();
                        let rhs = phi_map(&e, a).unwrap().add(&phi_map(&e, b).unwrap());
                        assert_eq!(lhs, rhs);
                    }
                }
                for x in elems.iter().filter(|x| !ker.contains(x)) {
                    assert!(phi_map(&e, x).is_err());
                }
            }
        }
    }
}

#[test]
fn phi_on_zero_map_mod_3() {
    // σ − 2 at s = 2 is zero on Z/3, so every element is in the kernel
    let f = DiffMatrix::from_rows(vec![vec![IntLaurent::from_i64(&[(1, 1), (0, -2)])]]).unwrap();
    let e = endo_from_diffmatrix(&f, 3, 2).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            let lhs = phi_map(&e, &[(a + b) % 3]).unwrap();
            assert_eq!(lhs, phi_map(&e, &[a]).unwrap().add(&phi_map(&e, &[b]).unwrap()));
        }
    }
}

/// Product of elementary row operations, so invertible mod any `n`.
fn unimodular(ops: &[(usize, usize, u64)], swap: bool, n: u64) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let mut p = vec![vec![1, 0], vec![0, 1]];
    let mut inv = p.clone();
    for &(i, j, c) in ops {
        if i == j {
            continue;
        }
        let mut el = vec![vec![1, 0], vec![0, 1]];
        el[i][j] = c % n;
        let mut el_inv = vec![vec![1, 0], vec![0, 1]];
        el_inv[i][j] = (n - c % n) % n;
        p = mul_mod(&el, &p, n);
        inv = mul_mod(&inv, &el_inv, n);
    }
    if swap {
        let s = vec![vec![0, 1], vec![1, 0]];
        p = mul_mod(&s, &p, n);
        inv = mul_mod(&inv, &s, n);
    }
    (p, inv)
}

proptest! {
    #[test]
    fn divisors_survive_change_of_basis(
        n in 2u64..=12,
        m in prop::collection::vec(0u64..12, 4),
        ops in prop::collection::vec((0usize..2, 0usize..2, 0u64..12), 0..6),
        swap in any::<bool>(),
    ) {
        let m = vec![vec![m[0] % n, m[1] % n], vec![m[2] % n, m[3] % n]];
        let (p, inv) = unimodular(&ops, swap, n);
        prop_assert_eq!(mul_mod(&p, &inv, n), vec![vec![1, 0], vec![0, 1]]);
        let conj = mul_mod(&mul_mod(&p, &m, n), &inv, n);
        let a = quotient_structure(&endo_from_matrix(m, n).unwrap());
        let b = quotient_structure(&endo_from_matrix(conj, n).unwrap());
        prop_assert_eq!(a.elementary_divisors, b.elementary_divisors);
    }
}
