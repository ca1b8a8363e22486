use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use potequiv::algebra::{CyclotomicField, IntMatrix, QMatrix};
use potequiv::powermap::{coset_power_identity, random_sl2};
use potequiv::torus::{
    decompose, invariant_order, norm_map, rep_matrix, theta_apply, twisted_product, LatticeAutomorphism,
    MonomialRep, SemidirectGroup, TorusPoint,
};

fn q() -> Arc<CyclotomicField> {
    CyclotomicField::new(1)
}

/// Test automorphisms: permutations, signed permutations and the rank-2 rotations.
fn automorphisms() -> Vec<LatticeAutomorphism> {
    let rows = |r: &[&[i64]]| LatticeAutomorphism::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap();
    vec![
        LatticeAutomorphism::inversion(),
        LatticeAutomorphism::cyclic_shift(2),
        LatticeAutomorphism::cyclic_shift(3),
        LatticeAutomorphism::cyclic_shift(4),
        rows(&[&[0, 1], &[-1, 0]]),
        rows(&[&[0, 1], &[-1, -1]]),
        rows(&[&[0, -1], &[1, 1]]),
        rows(&[&[-1, 0, 0], &[0, 0, 1], &[0, 1, 0]]),
        rows(&[&[0, 0, -1], &[1, 0, 0], &[0, 1, 0]]),
        rows(&[&[1, 0], &[0, -1]]),
    ]
}

fn automorphism(i: usize) -> LatticeAutomorphism {
    let all = automorphisms();
    all[i % all.len()].clone()
}

/// Random `GL_k(Z)` conjugate of a test automorphism, so non-permutation actions are covered.
fn conjugated(rng: &mut ChaCha8Rng, theta: &LatticeAutomorphism) -> LatticeAutomorphism {
    let k = theta.rank();
    let mut u = IntMatrix::identity(k);
    if k > 1 {
        for _ in 0..3 {
            let i = rng.gen_range(0..k);
            let j = (i + rng.gen_range(1..k)) % k;
            let mut e = IntMatrix::identity(k);
            e.set(i, j, BigInt::from(rng.gen_range(-2i64..=2)));
            u = &u * &e;
        }
    }
    let m = &(&u * theta.matrix()) * &u.unimodular_inverse().unwrap();
    LatticeAutomorphism::new(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn norm_is_invariant_and_killed_by_m(which in 0usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = conjugated(&mut rng, &automorphism(which));
        let m = invariant_order(&theta);
        if m.is_some() {
            prop_assert!(theta.norm_matrix().is_zero());
        }
        for _ in 0..5 {
            let x = TorusPoint::random(&mut rng, &q(), theta.rank(), 9);
            let n = norm_map(&theta, &x).unwrap();
            prop_assert_eq!(theta_apply(&theta, &n).unwrap(), n.clone());
            if let Some(m) = &m {
                prop_assert!(n.pow(m.to_i64().unwrap()).is_identity());
            }
        }
    }

    #[test]
    fn coset_orders_divide_mn(which in 0usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = automorphism(which);
        let Some(m) = invariant_order(&theta) else { return Ok(()) };
        let mn = m.to_u64().unwrap() * theta.order() as u64;
        let group = SemidirectGroup::new(theta.clone(), q());
        for _ in 0..100 {
            let x = TorusPoint::random(&mut rng, &q(), theta.rank(), 9);
            let k = group.coset_element_order(&x).unwrap();
            prop_assert_eq!(mn % k, 0);
            // without a central twist N_theta = 0 forces the order to be n
            prop_assert_eq!(k, theta.order() as u64);
        }
    }

    #[test]
    fn decomposition_invariants(which in 0usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = conjugated(&mut rng, &automorphism(which));
        let d = decompose(&theta, None).unwrap();
        prop_assert!(d.check_invariants(&theta).is_empty());
        prop_assert_eq!(d.fixed_rank() + d.y_rank(), theta.rank());
        let rank_oracle = theta.rank() - theta.matrix().sub(&IntMatrix::identity(theta.rank())).rank();
        prop_assert_eq!(d.fixed_rank(), rank_oracle);
        if d.fixed_rank() == 0 {
            prop_assert_eq!(d.invariant_order.clone(), invariant_order(&theta));
        }
    }

    #[test]
    fn rep_is_a_homomorphism(which in 0usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = conjugated(&mut rng, &automorphism(which));
        let lambda: Vec<i64> = (0..theta.rank()).map(|_| rng.gen_range(-2..=2)).collect();
        let rep = MonomialRep::new(lambda, theta.clone()).unwrap();
        let group = SemidirectGroup::new(theta.clone(), q());
        let n = theta.order();
        for _ in 0..5 {
            let g = group.element(TorusPoint::random(&mut rng, &q(), theta.rank(), 6), rng.gen_range(0..n)).unwrap();
            let h = group.element(TorusPoint::random(&mut rng, &q(), theta.rank(), 6), rng.gen_range(0..n)).unwrap();
            let lhs = rep_matrix(&rep, &group, &group.mul(&g, &h).unwrap()).unwrap();
            let rhs = rep_matrix(&rep, &group, &g).unwrap().mul(&rep_matrix(&rep, &group, &h).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn coset_expansion_in_the_representation(which in 0usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = automorphism(which);
        let lambda: Vec<i64> = (0..theta.rank()).map(|_| rng.gen_range(-2..=2)).collect();
        let rep = MonomialRep::new(lambda, theta.clone()).unwrap();
        let group = SemidirectGroup::new(theta.clone(), q());
        let x = TorusPoint::random(&mut rng, &q(), theta.rank(), 6);
        let rx = rep_matrix(&rep, &group, &group.element(x.clone(), 1).unwrap()).unwrap();
        let j = rep_matrix(&rep, &group, &group.j()).unwrap();
        for m in 1..=2 * theta.order() as u64 {
            let prod = twisted_product(&theta, &x, m).unwrap();
            let rp = rep_matrix(&rep, &group, &group.element(prod, 0).unwrap()).unwrap();
            prop_assert_eq!(rx.pow(m), rp.mul(&j.pow(m)));
        }
    }
}

fn random_rational_matrix(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let m = QMatrix::from_int_rows(&rows).scale(&potequiv::algebra::rat_frac(1, rng.gen_range(1..=4)));
        if !num_traits::Zero::is_zero(&m.determinant().unwrap()) {
            return m;
        }
    }
}

#[test]
fn coset_power_identity_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let n = 2 + i % 3;
        let x = random_rational_matrix(&mut rng, n);
        let j = if i % 2 == 0 {
            let mut perm: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
            QMatrix::from_int_rows(&(0..n).map(|r| (0..n).map(|c| i64::from(perm[r] == c)).collect()).collect::<Vec<_>>())
        } else if n == 2 {
            random_sl2(&mut rng, 3)
        } else {
            random_rational_matrix(&mut rng, n)
        };
        let m = rng.gen_range(1..=6);
        assert!(coset_power_identity(&x, &j, m).unwrap(), "x = {x}, J = {j}, m = {m}");
    }
}
